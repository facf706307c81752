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

// Theory oracles written independently of the decision procedures under test:
// an exact rational simplex for linear arithmetic and a naive congruence
// fixpoint for ground equality.

#ifndef LKT_TESTS_ORACLES_HPP
#define LKT_TESTS_ORACLES_HPP

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lkt/formulas.hpp"

namespace lkt::testing {

// max c.x  s.t.  A x <= b, x >= 0, by the tableau simplex with Bland's rule.
class Simplex {
 public:
  enum class Status { Optimal, Infeasible, Unbounded };

  Simplex(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
          const std::vector<Rational>& c)
      : m_(b.size()), n_(c.size()), basis_(m_), nonbasis_(n_ + 1), d_(m_ + 2, std::vector<Rational>(n_ + 2)) {
    for (size_t i = 0; i < m_; ++i) {
      for (size_t j = 0; j < n_; ++j) d_[i][j] = a[i][j];
      basis_[i] = static_cast<long>(n_ + i);
      d_[i][n_] = -1;
      d_[i][n_ + 1] = b[i];
    }
    for (size_t j = 0; j < n_; ++j) {
      nonbasis_[j] = static_cast<long>(j);
      d_[m_][j] = -c[j];
    }
    nonbasis_[n_] = -1;
    d_[m_ + 1][n_] = 1;
  }

  std::pair<Status, Rational> solve() {
    if (m_ > 0) {
      size_t r = 0;
      for (size_t i = 1; i < m_; ++i)
        if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
      if (d_[r][n_ + 1] < 0) {
        pivot(r, n_);
        if (!run(1) || d_[m_ + 1][n_ + 1] < 0) return {Status::Infeasible, 0};
        for (size_t i = 0; i < m_; ++i)
          if (basis_[i] == -1) {
            std::optional<size_t> s;
            for (size_t j = 0; j <= n_; ++j)
              if (d_[i][j] != 0 && (!s || nonbasis_[j] < nonbasis_[*s])) s = j;
            pivot(i, *s);
          }
      }
    }
    if (!run(2)) return {Status::Unbounded, 0};
    return {Status::Optimal, d_[m_][n_ + 1]};
  }

 private:
  void pivot(size_t r, size_t s) {
    Rational inv = 1 / d_[r][s];
    for (size_t i = 0; i < m_ + 2; ++i)
      if (i != r && d_[i][s] != 0)
        for (size_t j = 0; j < n_ + 2; ++j)
          if (j != s) d_[i][j] -= d_[r][j] * d_[i][s] * inv;
    for (size_t j = 0; j < n_ + 2; ++j)
      if (j != s) d_[r][j] *= inv;
    for (size_t i = 0; i < m_ + 2; ++i)
      if (i != r) d_[i][s] *= -inv;
    d_[r][s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  bool run(int phase) {
    size_t x = phase == 1 ? m_ + 1 : m_;
    for (;;) {
      std::optional<size_t> s;
      for (size_t j = 0; j <= n_; ++j) {
        if (phase == 2 && nonbasis_[j] == -1) continue;
        if (d_[x][j] < 0 && (!s || nonbasis_[j] < nonbasis_[*s])) s = j;
      }
      if (!s) return true;
      std::optional<size_t> r;
      for (size_t i = 0; i < m_; ++i) {
        if (d_[i][*s] <= 0) continue;
        if (!r) {
          r = i;
          continue;
        }
        Rational lhs = d_[i][n_ + 1] / d_[i][*s], rhs = d_[*r][n_ + 1] / d_[*r][*s];
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[*r])) r = i;
      }
      if (!r) return false;
      pivot(*r, *s);
    }
  }

  size_t m_, n_;
  std::vector<long> basis_, nonbasis_;
  std::vector<std::vector<Rational>> d_;
};

// Rational feasibility of a set of linear literals.  Strict rows get a common
// slack t in (0, 1] that the LP maximises.
inline bool lra_feasible(const LiteralSet& s) {
  std::vector<std::string> vars;
  for (const auto& l : s)
    for (const auto& [x, k] : l.atom.as_lin().coeffs) vars.push_back(x);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  const size_t nv = vars.size();
  // Columns: x_i^+ , x_i^- for each variable, then t.
  const size_t nc = 2 * nv + 1;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  auto row = [&](const std::map<std::string, Rational>& coeffs, Rational sign, Rational t) {
    std::vector<Rational> r(nc);
    for (const auto& [x, k] : coeffs) {
      size_t i = std::lower_bound(vars.begin(), vars.end(), x) - vars.begin();
      r[2 * i] = sign * k;
      r[2 * i + 1] = -sign * k;
    }
    r[nc - 1] = t;
    return r;
  };
  bool strict_rows = false;
  // add_ge(sign, b, strict) states sign*e >= sign*b (+ t when strict).
  for (const auto& l : s) {
    const auto& c = l.atom.as_lin();
    auto add_ge = [&](Rational sign, Rational bound, bool strict) {
      a.push_back(row(c.coeffs, -sign, strict ? Rational(1) : Rational(0)));
      b.push_back(-sign * bound);
      strict_rows |= strict;
    };
    if (c.relation == Relation::Equal) {
      if (l.positive) {
        add_ge(1, c.bound, false);
        add_ge(-1, c.bound, false);
        continue;
      }
      // A disequality splits into two strict alternatives.
      LiteralSet rest;
      for (const auto& o : s)
        if (!(o == l)) rest.insert(o);
      auto above = Literal{Atom::lin(c.coeffs, Relation::Greater, c.bound), true};
      auto below = Literal{Atom::lin(c.coeffs, Relation::GreaterEq, c.bound), false};
      return lra_feasible(rest.with(above)) || lra_feasible(rest.with(below));
    }
    bool strict = c.relation == Relation::Greater;
    if (l.positive) add_ge(1, c.bound, strict);
    else add_ge(-1, c.bound, !strict);  // not(e > b) is e <= b; not(e >= b) is e < b
  }
  std::vector<Rational> tcap(nc);
  tcap[nc - 1] = 1;
  a.push_back(tcap);
  b.push_back(1);
  std::vector<Rational> obj(nc);
  obj[nc - 1] = 1;
  auto [status, value] = Simplex(a, b, obj).solve();
  if (status == Simplex::Status::Infeasible) return false;
  return !strict_rows || value > 0;
}

// ---- congruence closure by naive fixpoint

inline bool euf_satisfiable(const LiteralSet& s) {
  std::vector<GroundTerm> terms;
  std::function<void(const GroundTerm&)> collect = [&](const GroundTerm& t) {
    terms.push_back(t);
    for (const auto& a : t.args()) collect(a);
  };
  for (const auto& l : s) {
    collect(l.atom.as_euf().lhs);
    collect(l.atom.as_euf().rhs);
  }
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  auto idx = [&](const GroundTerm& t) { return std::lower_bound(terms.begin(), terms.end(), t) - terms.begin(); };
  std::vector<size_t> cls(terms.size());
  for (size_t i = 0; i < cls.size(); ++i) cls[i] = i;
  auto merge = [&](size_t x, size_t y) {
    size_t from = cls[x], to = cls[y];
    if (from == to) return false;
    for (auto& c : cls)
      if (c == from) c = to;
    return true;
  };
  for (const auto& l : s)
    if (l.positive) merge(idx(l.atom.as_euf().lhs), idx(l.atom.as_euf().rhs));
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < terms.size(); ++i)
      for (size_t j = i + 1; j < terms.size(); ++j) {
        const auto &u = terms[i], &v = terms[j];
        if (cls[i] == cls[j] || u.symbol() != v.symbol() || u.args().size() != v.args().size() || u.args().empty())
          continue;
        bool cong = true;
        for (size_t k = 0; k < u.args().size() && cong; ++k) cong = cls[idx(u.args()[k])] == cls[idx(v.args()[k])];
        if (cong) changed |= merge(i, j);
      }
  }
  for (const auto& l : s)
    if (!l.positive && cls[idx(l.atom.as_euf().lhs)] == cls[idx(l.atom.as_euf().rhs)]) return false;
  return true;
}

// ---- generators

inline Literal random_lra_literal(std::mt19937_64& rng, int nvars) {
  std::uniform_int_distribution<int> coef(-3, 3), bound(-5, 5), rel(0, 2), nterms(1, std::min(nvars, 3));
  std::map<std::string, Rational> coeffs;
  int k = nterms(rng);
  for (int i = 0; i < k; ++i) {
    std::string x = "v" + std::to_string(std::uniform_int_distribution<int>(1, nvars)(rng));
    int c = coef(rng);
    if (c != 0) coeffs[x] = c;
  }
  if (coeffs.empty()) coeffs["v1"] = 1;
  static const Relation rels[] = {Relation::Greater, Relation::GreaterEq, Relation::Equal};
  return Literal{Atom::lin(coeffs, rels[rel(rng)], bound(rng)), std::bernoulli_distribution(0.7)(rng)};
}

inline GroundTerm random_term(std::mt19937_64& rng, int depth) {
  static const char* consts[] = {"a", "b", "c", "d"};
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 3);
  int k = pick(rng);
  if (k < 4) return GroundTerm::make(consts[k]);
  if (k == 4) return GroundTerm::make("f", {random_term(rng, depth - 1)});
  return GroundTerm::make("g", {random_term(rng, depth - 1), random_term(rng, depth - 1)});
}

inline Literal random_euf_literal(std::mt19937_64& rng) {
  return Literal{Atom::eq(random_term(rng, 2), random_term(rng, 2)), std::bernoulli_distribution(0.7)(rng)};
}

}  // namespace lkt::testing

#endif  // LKT_TESTS_ORACLES_HPP
