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

// Generators and brute-force oracles shared by the test binaries.

#ifndef LKT_TESTS_SUPPORT_HPP
#define LKT_TESTS_SUPPORT_HPP

#include <cstdint>
#include <random>
#include <string>
#include <map>
#include <stdexcept>
#include <variant>
#include <vector>

#include "lkt/formulas.hpp"
#include "lkt/kernel.hpp"

namespace lkt::testing {

using Rng = std::mt19937_64;

inline Literal var(int v, bool positive = true) { return prop_lit("x" + std::to_string(v), positive); }

// DIMACS-style integer clause.
inline Clause clause(std::initializer_list<int> lits) {
  std::vector<Literal> v;
  for (int l : lits) v.push_back(var(l > 0 ? l : -l, l > 0));
  return Clause(std::move(v));
}

inline Clause clause(const std::vector<int>& lits) {
  std::vector<Literal> v;
  for (int l : lits) v.push_back(var(l > 0 ? l : -l, l > 0));
  return Clause(std::move(v));
}

inline Sequent clause_statement(const std::vector<Clause>& phi) {
  std::vector<Formula> g;
  for (const auto& c : phi) g.push_back(represent_clause(c));
  return Sequent::unfocused(FormulaSet(std::move(g)));
}

// Truth-table satisfiability of integer clauses over variables 1..n.
inline bool satisfiable(const std::vector<std::vector<int>>& cnf, int n) {
  std::vector<std::pair<uint32_t, uint32_t>> masks;  // positive bits, negative bits
  for (const auto& c : cnf) {
    uint32_t pos = 0, neg = 0;
    for (int l : c) (l > 0 ? pos : neg) |= 1u << ((l > 0 ? l : -l) - 1);
    masks.emplace_back(pos, neg);
  }
  for (uint32_t a = 0; a < (1u << n); ++a) {
    bool ok = true;
    for (auto [pos, neg] : masks)
      if (!(a & pos) && !(~a & neg)) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

inline std::vector<Clause> to_clauses(const std::vector<std::vector<int>>& cnf) {
  std::vector<Clause> phi;
  for (const auto& c : cnf) phi.push_back(clause(c));
  return phi;
}

inline std::vector<std::vector<int>> random_cnf(Rng& rng, int nvars, int nclauses, int width) {
  std::uniform_int_distribution<int> v(1, nvars);
  std::bernoulli_distribution sign(0.5);
  std::vector<std::vector<int>> cnf;
  for (int i = 0; i < nclauses; ++i) {
    std::vector<int> c;
    while (static_cast<int>(c.size()) < width) {
      int x = v(rng);
      bool dup = false;
      for (int y : c) dup |= y == x || y == -x;
      if (!dup) c.push_back(sign(rng) ? x : -x);
    }
    cnf.push_back(c);
  }
  return cnf;
}

// Random polarised formula over the given atoms.
inline Formula random_formula(Rng& rng, int depth, int natoms) {
  std::uniform_int_distribution<int> pick(0, 9);
  int k = depth <= 0 ? 0 : pick(rng);
  if (k <= 2) {
    std::uniform_int_distribution<int> a(1, natoms);
    return Formula::lit(var(a(rng), std::bernoulli_distribution(0.5)(rng)));
  }
  switch (k) {
    case 3: return Formula::and_pos(random_formula(rng, depth - 1, natoms), random_formula(rng, depth - 1, natoms));
    case 4: return Formula::or_pos(random_formula(rng, depth - 1, natoms), random_formula(rng, depth - 1, natoms));
    case 5: return Formula::and_neg(random_formula(rng, depth - 1, natoms), random_formula(rng, depth - 1, natoms));
    case 6: return Formula::or_neg(random_formula(rng, depth - 1, natoms), random_formula(rng, depth - 1, natoms));
    case 7: {
      static const Connective cs[] = {Connective::TruePos, Connective::FalsePos, Connective::TrueNeg,
                                      Connective::FalseNeg};
      return Formula::constant(cs[std::uniform_int_distribution<int>(0, 3)(rng)]);
    }
    default: return Formula::or_neg(random_formula(rng, depth - 1, natoms), random_formula(rng, depth - 1, natoms));
  }
}


// ---- classical semantics over x1..x32, for validity oracles

inline bool eval(const Formula& f, uint32_t a) {
  switch (f.connective()) {
    case Connective::Lit: {
      const std::string& n = f.literal().atom.as_prop().name;
      bool v = (a >> (std::stoi(n.substr(1)) - 1)) & 1;
      return f.literal().positive ? v : !v;
    }
    case Connective::TruePos:
    case Connective::TrueNeg: return true;
    case Connective::FalsePos:
    case Connective::FalseNeg: return false;
    case Connective::AndPos:
    case Connective::AndNeg: return eval(f.left(), a) && eval(f.right(), a);
    case Connective::OrPos:
    case Connective::OrNeg: return eval(f.left(), a) || eval(f.right(), a);
  }
  return false;
}

// Gamma holds hypotheses, delta alternatives.
inline bool valid(const Sequent& s, int nvars) {
  for (uint32_t a = 0; a < (1u << nvars); ++a) {
    bool hyps = true;
    for (const auto& g : s.gamma()) hyps = hyps && eval(g, a);
    bool concl = false;
    for (const auto& d : s.delta()) concl = concl || eval(d, a);
    if (s.is_focused()) concl = concl || eval(s.focus(), a);
    if (hyps && !concl) return false;
  }
  return true;
}

// ---- scripted play

// A script step names a coin by id, a clause to select, or a formula of gamma
// to select.
using Step = std::variant<std::string, Clause, Formula>;

inline Coin find_coin(const Output& o, const Step& step) {
  std::string id;
  if (const auto* c = std::get_if<Clause>(&step)) {
    size_t i = o.goal().gamma().index_of(represent_clause(*c));
    if (i == FormulaSet::npos) throw std::runtime_error("clause " + to_string(*c) + " not in gamma");
    id = "focus:" + std::to_string(i);
  } else if (const auto* f = std::get_if<Formula>(&step)) {
    size_t i = o.goal().gamma().index_of(*f);
    if (i == FormulaSet::npos) throw std::runtime_error(f->to_string() + " not in gamma");
    id = "focus:" + std::to_string(i);
  } else {
    id = std::get<std::string>(step);
  }
  for (const auto& c : o.legal_coins())
    if (coin_id(c) == id) return c;
  throw std::runtime_error("coin " + id + " not offered at " + o.goal().to_string());
}

inline Output play(Output o, const std::vector<Step>& script) {
  for (const auto& step : script) o = o.insert(find_coin(o, step));
  return o;
}

inline Literal lra(std::map<std::string, Rational> c, Relation r, Rational b, bool positive = true) {
  return Literal{Atom::lin(std::move(c), r, std::move(b)), positive};
}

// {x>0}, {not(x+y>0)}, {y>0, x=-1}
struct LraExample {
  Literal x_gt_0 = lra({{"x", 1}}, Relation::Greater, 0);
  Literal xy_gt_0 = lra({{"x", 1}, {"y", 1}}, Relation::Greater, 0);
  Literal y_gt_0 = lra({{"y", 1}}, Relation::Greater, 0);
  Literal x_eq_m1 = lra({{"x", 1}}, Relation::Equal, -1);
  Clause c1{x_gt_0};
  Clause c2{xy_gt_0.negate()};
  Clause c3{y_gt_0, x_eq_m1};
  std::vector<Clause> phi{c1, c2, c3};

  // Propagate, Propagate, PropagateT, PropagateT, Fail.
  std::vector<Step> run1() const {
    return {c1, c2, "pol:" + y_gt_0.negate().to_string(), "pol:" + x_eq_m1.negate().to_string(), c3};
  }
  // Propagate, Propagate, PropagateT, Propagate, FailT.
  std::vector<Step> run2() const {
    return {c1, c2, "pol:" + y_gt_0.negate().to_string(), c3, std::string("check")};
  }
};

}  // namespace lkt::testing

#endif  // LKT_TESTS_SUPPORT_HPP
