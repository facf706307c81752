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

// Proof export: JSON (round-trips) and LaTeX (proof.sty, one way).

#ifndef LKT_PROOF_IO_HPP
#define LKT_PROOF_IO_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "lkt/proof.hpp"
#include "lkt/syntax.hpp"

namespace lkt {

using nlohmann::json;

inline json sequent_to_json(const Sequent& s) {
  json j;
  j["kind"] = s.is_focused() ? "focused" : "unfocused";
  json g = json::array();
  for (const auto& f : s.gamma()) g.push_back(f.to_string());
  j["gamma"] = std::move(g);
  if (s.is_focused()) {
    j["focus"] = s.focus().to_string();
  } else {
    json d = json::array();
    for (const auto& f : s.delta()) d.push_back(f.to_string());
    j["delta"] = std::move(d);
  }
  json p = json::array();
  for (const auto& l : s.pol().literals()) p.push_back(l.to_string());
  j["pol"] = std::move(p);
  return j;
}

inline Sequent sequent_from_json(const json& j) {
  std::vector<Formula> gamma;
  for (const auto& f : j.at("gamma")) gamma.push_back(parse_formula(f.get<std::string>()));
  std::vector<Literal> pol;
  for (const auto& l : j.at("pol")) pol.push_back(parse_literal(l.get<std::string>()));
  PolarisationSet p{LiteralSet(std::move(pol))};
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "focused") return Sequent::focused(FormulaSet(std::move(gamma)), parse_formula(j.at("focus").get<std::string>()), p);
  if (kind != "unfocused") throw std::invalid_argument("unknown sequent kind " + kind);
  std::vector<Formula> delta;
  for (const auto& f : j.at("delta")) delta.push_back(parse_formula(f.get<std::string>()));
  return Sequent::unfocused(FormulaSet(std::move(gamma)), std::move(delta), p);
}

// {rule, conclusion, certificate?, premises, reused?}.  A MemoHit node embeds
// the proof it reuses.
inline json proof_to_json(const ProofPtr& p) {
  json j;
  j["rule"] = std::string(to_string(p->rule));
  j["conclusion"] = sequent_to_json(p->conclusion);
  if (p->certificate) {
    json c = json::array();
    for (const auto& l : *p->certificate) c.push_back(l.to_string());
    j["certificate"] = std::move(c);
  }
  json prems = json::array();
  for (const auto& q : p->premises) prems.push_back(proof_to_json(q));
  j["premises"] = std::move(prems);
  if (p->reused) j["reused"] = proof_to_json(p->reused);
  return j;
}

inline ProofPtr proof_from_json(const json& j) {
  auto rule = rule_from_string(j.at("rule").get<std::string>());
  if (!rule) throw std::invalid_argument("unknown rule " + j.at("rule").get<std::string>());
  std::optional<LiteralSet> cert;
  if (j.contains("certificate")) {
    std::vector<Literal> v;
    for (const auto& l : j["certificate"]) v.push_back(parse_literal(l.get<std::string>()));
    cert = LiteralSet(std::move(v));
  }
  std::vector<ProofPtr> prems;
  for (const auto& q : j.at("premises")) prems.push_back(proof_from_json(q));
  ProofPtr reused = j.contains("reused") ? proof_from_json(j["reused"]) : nullptr;
  return make_proof(*rule, sequent_from_json(j.at("conclusion")), std::move(prems), std::move(cert), std::move(reused));
}

// ---- LaTeX

namespace detail {

inline std::string latex_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '_' || c == '#' || c == '%' || c == '&' || c == '$' || c == '{' || c == '}') o += '\\';
    o += c;
  }
  return o;
}

inline std::string latex_literal(const Literal& l) {
  std::string a = l.atom.is_prop() ? "\\mathit{" + latex_escape(l.atom.to_string()) + "}"
                                   : "\\texttt{" + latex_escape(l.atom.to_string()) + "}";
  return l.positive ? a : "\\lnot " + a;
}

inline std::string latex_formula(const Formula& f) {
  auto bin = [&](const char* op) {
    return "(" + latex_formula(f.left()) + " " + op + " " + latex_formula(f.right()) + ")";
  };
  switch (f.connective()) {
    case Connective::Lit: return latex_literal(f.literal());
    case Connective::TruePos: return "\\top^+";
    case Connective::FalsePos: return "\\bot^+";
    case Connective::TrueNeg: return "\\top^-";
    case Connective::FalseNeg: return "\\bot^-";
    case Connective::AndPos: return bin("\\wedge^+");
    case Connective::OrPos: return bin("\\vee^+");
    case Connective::AndNeg: return bin("\\wedge^-");
    case Connective::OrNeg: return bin("\\vee^-");
  }
  return "?";
}

inline std::string latex_sequent(const Sequent& s) {
  std::string o;
  for (const auto& f : s.gamma()) o += (o.empty() ? "" : ", ") + latex_formula(f);
  o += " \\vdash ";
  if (s.is_focused()) {
    o += "[" + latex_formula(s.focus()) + "]";
  } else {
    bool first = true;
    for (const auto& f : s.delta()) {
      o += (first ? "" : ", ") + latex_formula(f);
      first = false;
    }
  }
  return o;
}

inline void latex_tree(const ProofPtr& p, std::string& o) {
  o += "\\infer[" + std::string(to_string(p->rule)) + "]{" + latex_sequent(p->conclusion) + "}{";
  for (size_t i = 0; i < p->premises.size(); ++i) {
    if (i) o += " & ";
    latex_tree(p->premises[i], o);
  }
  o += "}";
}

}  // namespace detail

// Rendering is refused beyond `max_nodes`; big proofs do not typeset anyway.
inline std::optional<std::string> proof_to_latex(const ProofPtr& p, size_t max_nodes = 300) {
  if (p->node_count > max_nodes) return std::nullopt;
  std::string o = "\\[\n";
  detail::latex_tree(p, o);
  o += "\n\\]\n";
  return o;
}

}  // namespace lkt

#endif  // LKT_PROOF_IO_HPP
