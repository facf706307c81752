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

// Untrusted search strategies driving the kernel.  A plugin can only ever
// return answers it got from the kernel, either as a jackpot or out of its
// memo table.

#ifndef LKT_PLUGINS_HPP
#define LKT_PLUGINS_HPP

#include <functional>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "lkt/dpll_oracle.hpp"
#include "lkt/kernel.hpp"
#include "lkt/memo.hpp"

namespace lkt {

struct PluginError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PluginOptions {
  bool memo = true;
  // Coins inserted between successive restarts; restarts stop when exhausted.
  std::vector<size_t> restarts;
  size_t max_coins = 100'000'000;
};

struct PluginStats {
  size_t coins = 0;
  size_t failed_coins = 0;
  size_t memo_hits = 0;
  size_t restarts = 0;
  size_t segments = 0;       // kernel runs observed
  size_t max_steps = 0;      // largest step count of any run
  bool within_bound = true;  // every run stayed within its budget
};

class Plugin {
 public:
  explicit Plugin(PluginOptions options = {}) : options_(std::move(options)) {}
  virtual ~Plugin() = default;

  virtual std::string_view name() const = 0;

  Answer solve(const Output& first) {
    observe(first);
    Output out = first;
    restart(out);
    size_t since = 0, next_restart = 0;
    for (;;) {
      if (out.is_jackpot()) return out.answer();
      if (next_restart < options_.restarts.size() && since >= options_.restarts[next_restart]) {
        ++next_restart;
        ++stats_.restarts;
        since = 0;
        out = first;
        restart(out);
        continue;
      }
      if (stats_.coins >= options_.max_coins)
        throw PluginError("coin budget of " + std::to_string(options_.max_coins) + " exhausted");
      std::optional<Coin> c;
      if (options_.memo && out.accepts_memo())
        if (auto hit = memo_.lookup(out.goal().gamma())) {
          ++stats_.memo_hits;
          c = coin::Memo{*hit};
        }
      if (!c) c = choose(out);
      out = feed(out, *c);
      ++since;
    }
  }

  const PluginStats& stats() const { return stats_; }
  const MemoStore& memo() const { return memo_; }
  const PluginOptions& options() const { return options_; }

 protected:
  // Next coin for a paused output.
  virtual Coin choose(const Output& out) = 0;
  // Called when search (re)starts from the first output.
  virtual void restart(const Output&) {}

  Output feed(const Output& out, const Coin& c) {
    ++stats_.coins;
    Output next = out.insert(c);
    if (next.coin_failed()) ++stats_.failed_coins;
    observe(next);
    return next;
  }

 private:
  void observe(const Output& out) {
    for (const auto& s : out.segments()) {
      ++stats_.segments;
      stats_.max_steps = std::max(stats_.max_steps, s.steps);
      if (s.steps > s.budget) stats_.within_bound = false;
    }
    if (!options_.memo) return;
    for (const auto& a : out.closed_answers()) memo_.insert(a);
    if (out.is_jackpot()) memo_.insert(out.answer());
  }

  PluginOptions options_;
  PluginStats stats_;
  MemoStore memo_;
};

// ---------------------------------------------------------------------------
// Naive plugin: the first legal coin, always.

class NaivePlugin final : public Plugin {
 public:
  using Plugin::Plugin;
  std::string_view name() const override { return "naive"; }

 protected:
  Coin choose(const Output& out) override {
    auto coins = out.legal_coins();
    // Coin kinds in the order they are tried.
    for (size_t kind : {1u, 0u, 4u, 2u, 3u, 6u})
      for (const auto& c : coins)
        if (c.index() == kind) return c;
    throw PluginError("no legal coin at " + out.goal().to_string());
  }
};

// ---------------------------------------------------------------------------
// Two-watched-literal table.  Literal codes are 2v for the positive literal of
// variable v and 2v+1 for its negation.

class WatchTable {
 public:
  struct Update {
    std::vector<size_t> units;      // clauses with a single unassigned literal
    std::vector<size_t> conflicts;  // clauses with every literal false
  };

  static int neg(int code) { return code ^ 1; }

  WatchTable(std::vector<std::vector<int>> clauses, size_t nvars)
      : clauses_(std::move(clauses)), value_(nvars, 0), watchers_(2 * nvars) {
    watch_.resize(clauses_.size());
    for (size_t i = 0; i < clauses_.size(); ++i) {
      const auto& c = clauses_[i];
      if (c.empty()) continue;
      watch_[i] = {0, c.size() > 1 ? 1u : 0u};
      watchers_[c[0]].push_back(i);
      if (c.size() > 1) watchers_[c[1]].push_back(i);
    }
  }

  size_t clause_count() const { return clauses_.size(); }
  size_t var_count() const { return value_.size(); }
  const std::vector<int>& clause(size_t i) const { return clauses_[i]; }
  std::pair<int, int> watched(size_t i) const {
    return {clauses_[i][watch_[i][0]], clauses_[i][watch_[i][1]]};
  }

  // 1 true, -1 false, 0 unassigned.
  int value(int code) const {
    int v = value_[code >> 1];
    return (code & 1) ? -v : v;
  }

  Update assign(int code) {
    value_[code >> 1] = (code & 1) ? -1 : 1;
    Update up;
    int falsified = neg(code);
    auto& list = watchers_[falsified];
    for (size_t k = 0; k < list.size();) {
      size_t ci = list[k];
      const auto& c = clauses_[ci];
      auto& w = watch_[ci];
      // Which watch slot points at the falsified literal.
      unsigned slot = c[w[0]] == falsified ? 0 : 1;
      unsigned other = 1 - slot;
      if (c.size() == 1) {
        up.conflicts.push_back(ci);
        ++k;
        continue;
      }
      if (value(c[w[other]]) == 1) {
        ++k;
        continue;
      }
      bool moved = false;
      for (unsigned j = 0; j < c.size(); ++j) {
        if (j == w[0] || j == w[1] || value(c[j]) == -1) continue;
        w[slot] = j;
        watchers_[c[j]].push_back(ci);
        list[k] = list.back();
        list.pop_back();
        moved = true;
        break;
      }
      if (moved) continue;
      if (value(c[w[other]]) == 0) up.units.push_back(ci);
      else up.conflicts.push_back(ci);
      ++k;
    }
    return up;
  }

  void unassign(int code) { value_[code >> 1] = 0; }

  // Clause status from scratch, for use after unassignments.
  Update rescan() const {
    Update up;
    for (size_t i = 0; i < clauses_.size(); ++i) {
      size_t open = 0;
      bool sat = false;
      for (int l : clauses_[i]) {
        int v = value(l);
        sat |= v == 1;
        open += v == 0;
      }
      if (sat) continue;
      if (open == 0) up.conflicts.push_back(i);
      else if (open == 1) up.units.push_back(i);
    }
    return up;
  }

  // A false watch implies the other watch is true or no literal could
  // replace it.
  bool invariant_holds() const {
    for (size_t i = 0; i < clauses_.size(); ++i) {
      const auto& c = clauses_[i];
      if (c.size() < 2) continue;
      const auto& w = watch_[i];
      if (w[0] == w[1]) return false;
      for (unsigned s = 0; s < 2; ++s) {
        if (value(c[w[s]]) != -1) continue;
        if (value(c[w[1 - s]]) == 1) continue;
        for (unsigned j = 0; j < c.size(); ++j)
          if (j != w[0] && j != w[1] && value(c[j]) != -1) return false;
      }
      for (unsigned s = 0; s < 2; ++s) {
        const auto& list = watchers_[c[w[s]]];
        if (std::find(list.begin(), list.end(), i) == list.end()) return false;
      }
    }
    return true;
  }

 private:
  std::vector<std::vector<int>> clauses_;
  std::vector<int> value_;
  std::vector<std::array<unsigned, 2>> watch_;
  std::vector<std::vector<size_t>> watchers_;
};

// ---------------------------------------------------------------------------
// DPLL(T) with watched literals.  The plugin keeps a DPLL view (a trail of
// assigned literals plus the watch table) in lockstep with the polarisation
// set of the kernel's current goal, and translates each DPLL rule into coins:
//   Fail/Backtrack and Propagate  -> Focus on the clause
//   FailT/BacktrackT              -> ConsistencyCheck
//   PropagateT                    -> Polarise
//   Decide l                      -> CutLit on not-l

class DpllWlPlugin final : public Plugin {
 public:
  DpllWlPlugin(TheoryPtr theory, PluginOptions options = {}, bool allow_cuts = true)
      : Plugin(std::move(options)), theory_(std::move(theory)), allow_cuts_(allow_cuts) {}

  std::string_view name() const override { return "dpll_wl"; }

  // The plugin's DPLL trail for the current goal, decisions tagged.
  Trail trail() const {
    Trail t;
    for (size_t i = 0; i < trail_.size(); ++i) t.push_back({lits_[trail_[i]], decision_[i]});
    return t;
  }
  const std::vector<Clause>& clauses() const { return phi_; }
  const WatchTable& watches() const { return *table_; }
  // Name of the DPLL rule behind the last coin chosen.
  std::string_view last_rule() const { return last_rule_; }

 protected:
  void restart(const Output& out) override {
    if (!table_) build(out.statement());
    while (!trail_.empty()) pop();
    queue_ = table_->rescan();
    pending_decision_ = -1;
    refuting_ = false;
  }

  Coin choose(const Output& out) override {
    const Sequent& g = out.goal();
    if (!g.developed()) throw PluginError("unexpected non-developed goal " + g.to_string());
    if (out.coin_failed() && !refuting_) throw PluginError("coin failed: " + out.feedback());
    if (refuting_) return refutation_coin(out);
    sync(g.pol());
    const bool theory_active = theory_->name() != "empty";

    for (size_t ci : queue_.conflicts)
      if (status(ci).first == Status::Falsified) return focus(g, ci, "Fail");
    if (theory_active && inconsistent(*theory_, atm(g.gamma(), g.pol()))) {
      last_rule_ = "FailT";
      return coin::ConsistencyCheck{};
    }
    for (size_t ci : queue_.units)
      if (status(ci).first == Status::Unit) return focus(g, ci, "Propagate");
    if (theory_active) {
      LiteralSet a = atm(g.gamma(), g.pol());
      for (size_t v = 0; v < table_->var_count(); ++v) {
        if (table_->value(2 * v) != 0) continue;
        for (int code : {static_cast<int>(2 * v), static_cast<int>(2 * v + 1)})
          if (theory_->consistency(a.with(lits_[code].negate()))) {
            last_rule_ = "PropagateT";
            return coin::Polarise{lits_[code]};
          }
      }
    }
    // Unit propagation is complete here, so every clause is either satisfied
    // or has two unassigned literals.
    std::optional<size_t> open_clause;
    for (size_t ci = 0; ci < phi_.size() && !open_clause; ++ci)
      if (status(ci).first == Status::Open) open_clause = ci;
    if (!open_clause) {
      refuting_ = true;
      return refutation_coin(out);
    }
    if (!allow_cuts_) return focus(g, *open_clause, "Split");
    for (size_t v = 0; v < table_->var_count(); ++v) {
      if (table_->value(2 * v) != 0) continue;
      int code = occurs_[2 * v] ? static_cast<int>(2 * v) : static_cast<int>(2 * v + 1);
      pending_decision_ = code;
      last_rule_ = "Decide";
      return coin::CutLit{lits_[code].negate()};
    }
    throw PluginError("no unassigned variable in an open clause");
  }

 private:
  enum class Status { Satisfied, Falsified, Unit, Open };

  void build(const Sequent& statement) {
    std::vector<Literal> atoms;
    for (const auto& f : statement.gamma()) {
      auto c = clause_of(f);
      if (!c) throw PluginError("statement formula is not a clause: " + f.to_string());
      phi_.push_back(*c);
      formulas_.push_back(f);
      for (const auto& l : *c) atoms.push_back(Literal{l.atom, true});
    }
    LiteralSet vars(std::move(atoms));
    for (const auto& a : vars) {
      lits_.push_back(a);
      lits_.push_back(a.negate());
      occurs_.push_back(false);
      occurs_.push_back(false);
    }
    for (size_t i = 0; i < lits_.size(); ++i) code_[lits_[i].hash()].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> codes;
    for (const auto& c : phi_) {
      std::vector<int> cc;
      for (const auto& l : c) {
        cc.push_back(*code_of(l));
        occurs_[cc.back()] = true;
      }
      codes.push_back(std::move(cc));
    }
    table_ = std::make_unique<WatchTable>(std::move(codes), vars.size());
  }

  std::optional<int> code_of(const Literal& l) const {
    auto it = code_.find(l.hash());
    if (it == code_.end()) return std::nullopt;
    for (int c : it->second)
      if (lits_[c] == l) return c;
    return std::nullopt;
  }

  std::pair<Status, int> status(size_t ci) const {
    size_t open = 0;
    int last = -1;
    for (int l : table_->clause(ci)) {
      int v = table_->value(l);
      if (v == 1) return {Status::Satisfied, l};
      if (v == 0) {
        ++open;
        last = l;
      }
    }
    if (open == 0) return {Status::Falsified, -1};
    return {open == 1 ? Status::Unit : Status::Open, last};
  }

  void pop() {
    table_->unassign(trail_.back());
    trail_.pop_back();
    decision_.pop_back();
  }

  void push(int code, bool decision) {
    trail_.push_back(code);
    decision_.push_back(decision);
    auto up = table_->assign(code);
    queue_.units.insert(queue_.units.end(), up.units.begin(), up.units.end());
    queue_.conflicts.insert(queue_.conflicts.end(), up.conflicts.begin(), up.conflicts.end());
  }

  // Aligns the trail with the polarisation set of the goal.
  void sync(const PolarisationSet& pol) {
    size_t keep = 0;
    while (keep < trail_.size() && pol.contains(lits_[trail_[keep]])) ++keep;
    bool popped = keep < trail_.size();
    while (trail_.size() > keep) pop();
    if (popped) queue_ = table_->rescan();
    for (const auto& l : pol.literals()) {
      auto code = code_of(l);
      if (!code) continue;
      if (table_->value(*code) == 1) continue;
      if (table_->value(*code) == -1) throw PluginError("goal polarisation contradicts the trail");
      push(*code, *code == pending_decision_);
    }
    pending_decision_ = -1;
  }

  Coin focus(const Sequent& g, size_t ci, std::string_view rule) {
    size_t idx = g.gamma().index_of(formulas_[ci]);
    if (idx == FormulaSet::npos) throw PluginError("clause missing from goal: " + formulas_[ci].to_string());
    last_rule_ = rule;
    return coin::Focus{idx};
  }

  // Drives the kernel to refute a goal that satisfies every clause.
  Coin refutation_coin(const Output& out) {
    last_rule_ = "Refute";
    for (const auto& c : out.legal_coins())
      if (std::holds_alternative<coin::Focus>(c) || std::holds_alternative<coin::ConsistencyCheck>(c)) return c;
    throw PluginError("no refutation coin at " + out.goal().to_string());
  }

  TheoryPtr theory_;
  bool allow_cuts_;
  std::vector<Clause> phi_;
  std::vector<Formula> formulas_;
  std::vector<Literal> lits_;
  std::vector<bool> occurs_;
  std::unordered_map<size_t, std::vector<int>> code_;
  std::unique_ptr<WatchTable> table_;
  std::vector<int> trail_;
  std::vector<bool> decision_;
  WatchTable::Update queue_;
  int pending_decision_ = -1;
  bool refuting_ = false;
  std::string_view last_rule_;
};

// ---------------------------------------------------------------------------
// Interactive plugin: asks a person for every coin.

class InteractivePlugin final : public Plugin {
 public:
  InteractivePlugin(std::istream& in, std::ostream& out, PluginOptions options = {})
      : Plugin(std::move(options)), in_(in), out_(out) {}
  std::string_view name() const override { return "interactive"; }

 protected:
  Coin choose(const Output& out) override {
    for (;;) {
      if (out.coin_failed()) out_ << "coin lost: " << out.feedback() << '\n';
      out_ << "goal: " << out.goal().to_string() << '\n';
      auto coins = out.legal_coins();
      for (size_t i = 0; i < coins.size(); ++i) out_ << "  [" << i << "] " << coin_id(coins[i]) << '\n';
      out_ << "coin> " << std::flush;
      std::string line;
      if (!std::getline(in_, line)) throw PluginError("input closed");
      for (size_t i = 0; i < coins.size(); ++i)
        if (line == coin_id(coins[i]) || line == std::to_string(i)) return coins[i];
      out_ << "unknown coin '" << line << "'\n";
    }
  }

 private:
  std::istream& in_;
  std::ostream& out_;
};

inline std::unique_ptr<Plugin> make_plugin(std::string_view name, const Kernel& kernel, PluginOptions options,
                                           bool allow_cuts = true, std::istream& in = std::cin,
                                           std::ostream& out = std::cout) {
  if (name == "naive") return std::make_unique<NaivePlugin>(std::move(options));
  if (name == "dpll_wl") return std::make_unique<DpllWlPlugin>(kernel.theory_ptr(), std::move(options), allow_cuts);
  if (name == "interactive") return std::make_unique<InteractivePlugin>(in, out, std::move(options));
  throw std::invalid_argument("unknown plugin '" + std::string(name) + "'");
}

}  // namespace lkt

#endif  // LKT_PLUGINS_HPP
