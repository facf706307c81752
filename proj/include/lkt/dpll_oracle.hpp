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

// Reference implementation of the elementary DPLL(T) transition system:
// Decide, Propagate, PropagateT, Fail, FailT, Backtrack, BacktrackT.

#ifndef LKT_DPLL_ORACLE_HPP
#define LKT_DPLL_ORACLE_HPP

#include <algorithm>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lkt/formulas.hpp"
#include "lkt/theories.hpp"

namespace lkt {

struct TaggedLiteral {
  Literal lit;
  bool decision = false;
  friend bool operator==(const TaggedLiteral&, const TaggedLiteral&) = default;
};

using Trail = std::vector<TaggedLiteral>;

struct DpllState {
  bool unsat = false;
  Trail delta;
  std::vector<Clause> phi;

  static DpllState initial(std::vector<Clause> phi) { return DpllState{false, {}, std::move(phi)}; }
  static DpllState failed(std::vector<Clause> phi) { return DpllState{true, {}, std::move(phi)}; }
  friend bool operator==(const DpllState&, const DpllState&) = default;
};

enum class TransitionKind : uint8_t { Decide, Propagate, PropagateT, Fail, FailT, Backtrack, BacktrackT };

inline std::string_view to_string(TransitionKind k) {
  static constexpr std::string_view names[] = {"Decide", "Propagate", "PropagateT", "Fail",
                                               "FailT", "Backtrack", "BacktrackT"};
  return names[static_cast<size_t>(k)];
}

// `clause` is the whole clause C v l for Propagate and the falsified clause
// for Fail/Backtrack; `lit` is the literal Decide, Propagate or PropagateT add.
struct Transition {
  TransitionKind kind;
  std::optional<Literal> lit;
  std::optional<Clause> clause;

  static Transition decide(Literal l) { return {TransitionKind::Decide, l, std::nullopt}; }
  static Transition propagate(Clause c, Literal l) { return {TransitionKind::Propagate, l, std::move(c)}; }
  static Transition propagate_t(Literal l) { return {TransitionKind::PropagateT, l, std::nullopt}; }
  static Transition fail(Clause c) { return {TransitionKind::Fail, std::nullopt, std::move(c)}; }
  static Transition fail_t() { return {TransitionKind::FailT, std::nullopt, std::nullopt}; }
  static Transition backtrack(Clause c) { return {TransitionKind::Backtrack, std::nullopt, std::move(c)}; }
  static Transition backtrack_t() { return {TransitionKind::BacktrackT, std::nullopt, std::nullopt}; }

  friend bool operator==(const Transition&, const Transition&) = default;

  std::string to_string() const {
    std::string s(lkt::to_string(kind));
    if (clause) s += " " + lkt::to_string(*clause);
    if (lit) s += " " + lit->to_string();
    return s;
  }
};

struct TransitionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---- trail helpers

inline LiteralSet literals_of(const Trail& delta) {
  std::vector<Literal> v;
  v.reserve(delta.size());
  for (const auto& t : delta) v.push_back(t.lit);
  return LiteralSet(std::move(v));
}

inline bool has_decision(const Trail& delta) {
  for (const auto& t : delta)
    if (t.decision) return true;
  return false;
}

inline size_t decision_count(const Trail& delta) {
  size_t n = 0;
  for (const auto& t : delta) n += t.decision;
  return n;
}

// Every literal of c has its negation in delta.
inline bool falsifies(const LiteralSet& delta, const Clause& c) {
  for (const auto& l : c)
    if (!delta.contains(l.negate())) return false;
  return true;
}

// The atoms of phi, as their positive literals.
inline LiteralSet atoms_of(const std::vector<Clause>& phi) {
  std::vector<Literal> v;
  for (const auto& c : phi)
    for (const auto& l : c) v.push_back(Literal{l.atom, true});
  return LiteralSet(std::move(v));
}

// Literals whose atom occurs in phi, both signs.
inline LiteralSet signed_atoms_of(const std::vector<Clause>& phi) {
  std::vector<Literal> v;
  for (const auto& c : phi)
    for (const auto& l : c) {
      v.push_back(l);
      v.push_back(l.negate());
    }
  return LiteralSet(std::move(v));
}

// The alternatives left open by the decisions of delta, innermost first.
inline std::vector<LiteralSet> backtrack_points(const Trail& delta) {
  std::vector<LiteralSet> out;
  std::vector<Literal> prefix;
  for (const auto& t : delta) {
    if (t.decision) {
      std::vector<Literal> alt = prefix;
      alt.push_back(t.lit.negate());
      out.push_back(LiteralSet(std::move(alt)));
    }
    prefix.push_back(t.lit);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Replaces the last decision l^d by the plain literal not-l, dropping what follows.
inline Trail backtracked(const Trail& delta) {
  size_t i = delta.size();
  while (i-- > 0)
    if (delta[i].decision) break;
  Trail out(delta.begin(), delta.begin() + i);
  out.push_back({delta[i].lit.negate(), false});
  return out;
}

// ---- transitions

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw TransitionError(what);
}

inline void require_fresh(const LiteralSet& d, const Literal& l) {
  require(!d.contains(l) && !d.contains(l.negate()), l.to_string() + " is already assigned");
}

inline void require_clause(const std::vector<Clause>& phi, const Clause& c) {
  require(std::find(phi.begin(), phi.end(), c) != phi.end(), to_string(c) + " is not a clause of phi");
}

}  // namespace detail

inline DpllState apply(const DpllState& s, const Transition& t, const DecisionProcedure& dp) {
  using detail::require;
  require(!s.unsat, "state is unsat");
  LiteralSet d = literals_of(s.delta);
  DpllState next = s;
  switch (t.kind) {
    case TransitionKind::Decide: {
      require(t.lit.has_value(), "Decide needs a literal");
      detail::require_fresh(d, *t.lit);
      require(signed_atoms_of(s.phi).contains(*t.lit), t.lit->to_string() + " is not in atm phi");
      next.delta.push_back({*t.lit, true});
      return next;
    }
    case TransitionKind::Propagate: {
      require(t.lit && t.clause, "Propagate needs a clause and a literal");
      detail::require_clause(s.phi, *t.clause);
      require(t.clause->contains(*t.lit), t.lit->to_string() + " is not in the clause");
      detail::require_fresh(d, *t.lit);
      Clause rest = *t.clause;
      rest.erase(*t.lit);
      require(falsifies(d, rest), "delta does not falsify the rest of the clause");
      next.delta.push_back({*t.lit, false});
      return next;
    }
    case TransitionKind::PropagateT: {
      require(t.lit.has_value(), "PropagateT needs a literal");
      detail::require_fresh(d, *t.lit);
      require(signed_atoms_of(s.phi).contains(*t.lit), t.lit->to_string() + " is not in atm phi");
      require(m_sat_member(dp, d, *t.lit), "delta does not entail " + t.lit->to_string() + " in the theory");
      next.delta.push_back({*t.lit, false});
      return next;
    }
    case TransitionKind::Fail:
    case TransitionKind::Backtrack: {
      require(t.clause.has_value(), "needs a clause");
      detail::require_clause(s.phi, *t.clause);
      require(falsifies(d, *t.clause), "delta does not falsify " + to_string(*t.clause));
      break;
    }
    case TransitionKind::FailT:
    case TransitionKind::BacktrackT:
      require(inconsistent(dp, d), "delta is consistent in the theory");
      break;
  }
  bool fail = t.kind == TransitionKind::Fail || t.kind == TransitionKind::FailT;
  if (fail) {
    require(!has_decision(s.delta), "delta has a decision literal");
    return DpllState::failed(s.phi);
  }
  require(has_decision(s.delta), "delta has no decision literal");
  next.delta = backtracked(s.delta);
  return next;
}

inline std::vector<Transition> legal_transitions(const DpllState& s, const DecisionProcedure& dp) {
  if (s.unsat) throw TransitionError("state is unsat");
  std::vector<Transition> out;
  LiteralSet d = literals_of(s.delta);
  bool dec = has_decision(s.delta);
  for (const auto& c : s.phi) {
    if (falsifies(d, c)) out.push_back(dec ? Transition::backtrack(c) : Transition::fail(c));
    for (const auto& l : c) {
      if (d.contains(l) || d.contains(l.negate())) continue;
      Clause rest = c;
      rest.erase(l);
      if (falsifies(d, rest)) {
        auto t = Transition::propagate(c, l);
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
      }
    }
  }
  if (inconsistent(dp, d)) out.push_back(dec ? Transition::backtrack_t() : Transition::fail_t());
  for (const auto& l : signed_atoms_of(s.phi)) {
    if (d.contains(l) || d.contains(l.negate())) continue;
    if (m_sat_member(dp, d, l)) out.push_back(Transition::propagate_t(l));
  }
  for (const auto& l : signed_atoms_of(s.phi))
    if (!d.contains(l) && !d.contains(l.negate())) out.push_back(Transition::decide(l));
  return out;
}

using Strategy = std::function<std::optional<Transition>(const DpllState&, const DecisionProcedure&)>;

// Fail/Backtrack, then FailT/BacktrackT, then Propagate, then PropagateT, then
// Decide on the lowest unassigned atom (positive literal first).
inline std::optional<Transition> default_strategy(const DpllState& s, const DecisionProcedure& dp) {
  LiteralSet d = literals_of(s.delta);
  bool dec = has_decision(s.delta);
  for (const auto& c : s.phi)
    if (falsifies(d, c)) return dec ? Transition::backtrack(c) : Transition::fail(c);
  if (inconsistent(dp, d)) return dec ? Transition::backtrack_t() : Transition::fail_t();
  for (const auto& c : s.phi) {
    bool sat = false;
    std::optional<Literal> open;
    size_t n_open = 0;
    for (const auto& l : c) {
      if (d.contains(l)) sat = true;
      else if (!d.contains(l.negate())) {
        open = l;
        ++n_open;
      }
    }
    if (!sat && n_open == 1) return Transition::propagate(c, *open);
  }
  for (const auto& l : signed_atoms_of(s.phi))
    if (!d.contains(l) && !d.contains(l.negate()) && m_sat_member(dp, d, l)) return Transition::propagate_t(l);
  for (const auto& a : atoms_of(s.phi))
    if (!d.contains(a) && !d.contains(a.negate())) return Transition::decide(a);
  return std::nullopt;
}

struct RunResult {
  bool unsat = false;
  Trail delta;  // final trail when saturated
  std::vector<std::pair<Transition, DpllState>> trace;
};

inline RunResult run(const std::vector<Clause>& phi, const DecisionProcedure& dp,
                     const Strategy& strategy = default_strategy, size_t limit = 1'000'000) {
  RunResult r;
  DpllState s = DpllState::initial(phi);
  for (size_t i = 0;; ++i) {
    if (s.unsat) {
      r.unsat = true;
      return r;
    }
    auto t = strategy(s, dp);
    if (!t) {
      r.delta = s.delta;
      return r;
    }
    if (i == limit) throw std::runtime_error("step limit of " + std::to_string(limit) + " exceeded");
    s = apply(s, *t, dp);
    r.trace.emplace_back(*t, s);
  }
}

inline std::string to_string(const Trail& delta) {
  std::string s;
  for (const auto& t : delta) {
    s += s.empty() ? "" : ", ";
    s += t.lit.to_string() + (t.decision ? "^d" : "");
  }
  return s;
}

// One line per transition: "RULE params : delta || |phi|".
inline void dump_trace(std::ostream& os, const RunResult& r) {
  for (const auto& [t, s] : r.trace)
    os << t.to_string() << " : " << (s.unsat ? "unsat" : to_string(s.delta)) << " || " << s.phi.size() << '\n';
}

}  // namespace lkt

#endif  // LKT_DPLL_ORACLE_HPP
