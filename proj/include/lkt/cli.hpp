/* Copyright 2026 The lkt Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Command-line driver.  Exit status: 0 when solved (and matching the expected
// answer if the input states one), 2 on a mismatch, 1 on any error.

#ifndef LKT_CLI_HPP
#define LKT_CLI_HPP

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lkt/parsers.hpp"
#include "lkt/plugins.hpp"
#include "lkt/proof_io.hpp"
#include "lkt/proofcheck.hpp"
#include "lkt/serve.hpp"

namespace lkt {

struct CliConfig {
  std::string input = "-";
  std::string format = "auto";
  std::string theory;
  std::string plugin = "dpll_wl";
  bool no_memo = false;
  bool no_cuts = false;
  std::vector<size_t> restarts;
  std::string proof_out;
  bool latex = false;
  int serve = -1;
  std::string memo_dump;
  bool stats = false;
  size_t max_coins = 100'000'000;
};

namespace detail {

inline bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline std::string guess_format(const std::string& path, const std::string& text) {
  if (ends_with(path, ".cnf") || ends_with(path, ".dimacs")) return "dimacs";
  if (ends_with(path, ".smt2") || ends_with(path, ".smt")) return "smt";
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    char c = line[i];
    if (c == 'c' || c == ';') continue;
    return c == '(' ? "smt" : "dimacs";
  }
  return "dimacs";
}

inline int run_configured(const CliConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  std::string text;
  if (cfg.input == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(cfg.input);
    if (!f) {
      err << "error: cannot read " << cfg.input << '\n';
      return 1;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  std::string format = cfg.format == "auto" ? guess_format(cfg.input, text) : cfg.format;
  ParsedProblem prob = format == "dimacs" ? parse_dimacs(text) : parse_mini_smt(text);
  for (const auto& w : prob.warnings) err << "warning: " << w << '\n';
  if (!prob.statement) {
    err << "error: input states no problem (needs assertions and check-sat)\n";
    return 1;
  }
  std::string theory = !cfg.theory.empty() ? cfg.theory : prob.theory.value_or("empty");
  auto kernel = std::make_shared<const Kernel>(make_theory(theory), KernelOptions{!cfg.no_cuts});

  if (cfg.serve >= 0) {
    Sequent statement = *prob.statement;
    Server server([kernel, statement] { return Session(kernel, statement); },
                  static_cast<unsigned short>(cfg.serve));
    out << "listening on 127.0.0.1:" << server.port() << std::endl;
    server.run();
    return 0;
  }

  PluginOptions popts;
  popts.memo = !cfg.no_memo;
  popts.restarts = cfg.restarts;
  popts.max_coins = cfg.max_coins;
  auto plugin = make_plugin(cfg.plugin, *kernel, popts, !cfg.no_cuts, in, err);
  Answer answer = plugin->solve(kernel->machine(*prob.statement));

  if (answer.provable()) {
    auto verdict = check(answer.proof(), kernel->theory());
    if (!verdict.ok) {
      err << "error: proof rejected by the checker: " << verdict.diagnostic << '\n';
      return 1;
    }
  }
  out << (answer.provable() ? "PROVABLE" : "NOTPROVABLE") << '\n';
  if (cfg.stats) {
    const auto& s = plugin->stats();
    err << "coins " << s.coins << ", failed " << s.failed_coins << ", memo hits " << s.memo_hits << ", restarts "
        << s.restarts << ", kernel runs " << s.segments << ", max steps " << s.max_steps << '\n';
    if (answer.provable()) err << "proof nodes " << answer.proof()->node_count << '\n';
  }
  if (!cfg.proof_out.empty()) {
    if (answer.provable()) {
      std::ofstream f(cfg.proof_out);
      f << proof_to_json(answer.proof()).dump(1) << '\n';
      if (!f) {
        err << "error: cannot write " << cfg.proof_out << '\n';
        return 1;
      }
    } else {
      err << "warning: no proof to write\n";
    }
  }
  if (cfg.latex && answer.provable()) {
    if (auto tex = proof_to_latex(answer.proof())) out << *tex;
    else out << "% proof has " << answer.proof()->node_count << " nodes, too large to typeset\n";
  }
  if (!cfg.memo_dump.empty()) {
    std::ofstream f(cfg.memo_dump);
    plugin->memo().dump(f);
  }
  if (prob.expected) {
    bool ok = *prob.expected == answer.provable();
    out << (ok ? "OK" : "MISMATCH") << '\n';
    return ok ? 0 : 2;
  }
  return 0;
}

}  // namespace detail

// `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Proof search modulo theories in a focused sequent calculus", "lkt"};
  app.add_option("input", cfg.input, "Problem file (DIMACS or SMT-LIB subset); '-' reads stdin");
  app.add_option("--format", cfg.format, "Input format")->check(CLI::IsMember({"auto", "dimacs", "smt"}));
  app.add_option("--theory", cfg.theory, "Decision procedure")->check(CLI::IsMember({"empty", "lra", "cc"}));
  app.add_option("--plugin", cfg.plugin, "Search strategy")->check(CLI::IsMember({"naive", "dpll_wl", "interactive"}));
  app.add_flag("--no-memo", cfg.no_memo, "Disable memoisation");
  app.add_flag("--no-cuts", cfg.no_cuts, "Forbid cuts in proofs");
  app.add_option("--restarts", cfg.restarts, "Coins between restarts, e.g. 100,200,400")->delimiter(',');
  app.add_option("--proof-out", cfg.proof_out, "Write the proof as JSON");
  app.add_flag("--latex", cfg.latex, "Print the proof as a LaTeX inference tree");
  app.add_option("--serve", cfg.serve, "Serve interactive sessions on this TCP port")->check(CLI::Range(0, 65535));
  app.add_option("--memo-dump", cfg.memo_dump, "Write the memo table to this file");
  app.add_flag("--stats", cfg.stats, "Print search statistics to stderr");
  app.add_option("--max-coins", cfg.max_coins, "Give up after this many coins");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  try {
    return detail::run_configured(cfg, in, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lkt

#endif  // LKT_CLI_HPP
