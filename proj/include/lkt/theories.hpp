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

// Ground decision procedures.  A procedure maps a set of literals to nothing
// (consistent) or to an inconsistent subset of its input.

#ifndef LKT_THEORIES_HPP
#define LKT_THEORIES_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lkt/formulas.hpp"

namespace lkt {

struct TheoryError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class DecisionProcedure {
 public:
  virtual ~DecisionProcedure() = default;
  virtual std::string_view name() const = 0;
  virtual std::optional<LiteralSet> consistency(const LiteralSet& s) const = 0;
  // Atoms the procedure gives a meaning to; all other atoms are opaque.
  virtual bool interprets(const Atom& a) const = 0;
};

using TheoryPtr = std::shared_ptr<const DecisionProcedure>;

inline std::optional<LiteralSet> syntactic_consistency(const LiteralSet& s) {
  // l and its negation are adjacent in the canonical order.
  for (size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i].atom == s[i + 1].atom) return LiteralSet{s[i], s[i + 1]};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Linear rational arithmetic

namespace detail {

// sum(coeffs[i] * x_i) >= rhs, or > rhs when strict.
struct FmRow {
  std::vector<Rational> coeffs;
  Rational rhs;
  bool strict = false;
  std::vector<uint32_t> origin;  // sorted indices of input literals

  bool trivial() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& c) { return c == 0; });
  }
  // Only meaningful when trivial(): 0 >= rhs or 0 > rhs fails.
  bool contradictory() const { return strict ? rhs >= 0 : rhs > 0; }

  void normalise() {
    for (const auto& c : coeffs) {
      if (c != 0) {
        Rational k = abs(c);
        if (k != 1) {
          for (auto& d : coeffs) d /= k;
          rhs /= k;
        }
        return;
      }
    }
  }
};

inline std::vector<uint32_t> merge_origins(const std::vector<uint32_t>& a,
                                           const std::vector<uint32_t>& b) {
  std::vector<uint32_t> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Fourier-Motzkin elimination with provenance.  Returns the origin of a
// derived contradiction, preferring small ones.
inline std::optional<std::vector<uint32_t>> fm_refute(std::vector<FmRow> rows, size_t nvars) {
  auto best_contradiction = [](const std::vector<FmRow>& rs) -> std::optional<std::vector<uint32_t>> {
    const FmRow* best = nullptr;
    for (const auto& r : rs)
      if (r.trivial() && r.contradictory() && (!best || r.origin.size() < best->origin.size()))
        best = &r;
    if (!best) return std::nullopt;
    return best->origin;
  };
  std::vector<bool> eliminated(nvars, false);
  for (size_t round = 0; round < nvars; ++round) {
    if (auto c = best_contradiction(rows)) return c;
    // Eliminate the variable producing the fewest new rows.
    size_t var = nvars;
    long best_cost = 0;
    for (size_t v = 0; v < nvars; ++v) {
      if (eliminated[v]) continue;
      long pos = 0, neg = 0;
      for (const auto& r : rows) {
        if (r.coeffs[v] > 0) ++pos;
        if (r.coeffs[v] < 0) ++neg;
      }
      long cost = pos * neg - pos - neg;
      if (var == nvars || cost < best_cost) {
        var = v;
        best_cost = cost;
      }
    }
    eliminated[var] = true;
    std::vector<FmRow> next, pos, neg;
    for (auto& r : rows) {
      if (r.coeffs[var] > 0)
        pos.push_back(std::move(r));
      else if (r.coeffs[var] < 0)
        neg.push_back(std::move(r));
      else
        next.push_back(std::move(r));
    }
    for (const auto& p : pos) {
      for (const auto& n : neg) {
        Rational mp = -n.coeffs[var], mn = p.coeffs[var];
        FmRow r;
        r.coeffs.resize(nvars);
        for (size_t v = 0; v < nvars; ++v) r.coeffs[v] = mp * p.coeffs[v] + mn * n.coeffs[v];
        r.coeffs[var] = 0;
        r.rhs = mp * p.rhs + mn * n.rhs;
        r.strict = p.strict || n.strict;
        r.origin = merge_origins(p.origin, n.origin);
        r.normalise();
        next.push_back(std::move(r));
      }
    }
    // Drop duplicates, keeping the smallest provenance; trivially true rows go.
    std::map<std::pair<std::vector<std::string>, bool>, size_t> seen;
    std::vector<FmRow> dedup;
    for (auto& r : next) {
      if (r.trivial() && !r.contradictory()) continue;
      std::vector<std::string> key;
      key.reserve(nvars + 1);
      for (const auto& c : r.coeffs) key.push_back(c.str());
      key.push_back(r.rhs.str());
      auto [it, inserted] = seen.emplace(std::make_pair(std::move(key), r.strict), dedup.size());
      if (inserted) {
        dedup.push_back(std::move(r));
      } else if (r.origin.size() < dedup[it->second].origin.size()) {
        dedup[it->second] = std::move(r);
      }
    }
    rows = std::move(dedup);
  }
  return best_contradiction(rows);
}

}  // namespace detail

// Exact Fourier-Motzkin over literals on linear constraints.  Disequalities
// (negated equalities) are handled by convexity: the system with disequalities
// is infeasible iff the rest is, or some single disequality is implied false.
inline std::optional<LiteralSet> lra_consistency(const LiteralSet& s) {
  std::map<std::string, size_t> var_index;
  std::vector<Literal> lits(s.begin(), s.end());
  for (const auto& l : lits) {
    if (l.atom.kind() != AtomKind::Lin)
      throw TheoryError("non-LRA literal in input: " + l.to_string());
    for (const auto& [x, k] : l.atom.as_lin().coeffs) var_index.emplace(x, 0);
  }
  size_t nvars = 0;
  for (auto& [x, idx] : var_index) idx = nvars++;

  auto dense = [&](const LinConstraint& c, const Rational& sign) {
    std::vector<Rational> v(nvars);
    for (const auto& [x, k] : c.coeffs) v[var_index.at(x)] = sign * k;
    return v;
  };
  std::vector<detail::FmRow> rows;
  std::vector<uint32_t> disequalities;
  for (uint32_t i = 0; i < lits.size(); ++i) {
    const auto& c = lits[i].atom.as_lin();
    auto add = [&](const Rational& sign, bool strict) {
      detail::FmRow r{dense(c, sign), sign * c.bound, strict, {i}};
      r.normalise();
      rows.push_back(std::move(r));
    };
    if (lits[i].positive) {
      switch (c.relation) {
        case Relation::Greater: add(1, true); break;
        case Relation::GreaterEq: add(1, false); break;
        case Relation::Equal:
          add(1, false);
          add(-1, false);
          break;
      }
    } else {
      switch (c.relation) {
        case Relation::Greater: add(-1, false); break;   // e <= b
        case Relation::GreaterEq: add(-1, true); break;  // e < b
        case Relation::Equal: disequalities.push_back(i); break;
      }
    }
  }
  auto to_set = [&](const std::vector<uint32_t>& origin) {
    std::vector<Literal> out;
    for (auto i : origin) out.push_back(lits[i]);
    return LiteralSet(std::move(out));
  };
  if (auto origin = detail::fm_refute(rows, nvars)) return to_set(*origin);

  std::optional<LiteralSet> best;
  for (auto d : disequalities) {
    const auto& c = lits[d].atom.as_lin();
    const uint32_t probe = static_cast<uint32_t>(lits.size());
    std::vector<uint32_t> origin;
    bool implied = true;
    for (int sign : {1, -1}) {
      auto extended = rows;
      detail::FmRow r{dense(c, sign), sign * c.bound, true, {probe}};
      r.normalise();
      extended.push_back(std::move(r));
      auto o = detail::fm_refute(std::move(extended), nvars);
      if (!o) {
        implied = false;
        break;
      }
      origin = detail::merge_origins(origin, *o);
    }
    if (!implied) continue;
    std::erase(origin, probe);
    origin = detail::merge_origins(origin, {d});
    LiteralSet cert = to_set(origin);
    if (!best || cert.size() < best->size()) best = std::move(cert);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Congruence closure

namespace detail {

class CongruenceClosure {
 public:
  size_t add_term(const GroundTerm& t) {
    auto it = ids_.find(key(t));
    if (it != ids_.end()) return it->second;
    std::vector<size_t> args;
    for (const auto& a : t.args()) args.push_back(add_term(a));
    size_t id = terms_.size();
    terms_.push_back({t.symbol(), std::move(args)});
    ids_.emplace(key(t), id);
    parent_.push_back(id);
    proof_parent_.push_back(id);
    proof_reason_.push_back({});
    return id;
  }

  // reason >= 0: index of an input equality; otherwise a congruence between
  // the two endpoints of the edge.
  void merge(size_t a, size_t b, long reason) {
    pending_.push_back({a, b, reason});
    while (!pending_.empty()) {
      auto [x, y, why] = pending_.back();
      pending_.pop_back();
      if (find(x) == find(y)) continue;
      add_proof_edge(x, y, why);
      parent_[find(x)] = find(y);
      // Re-examine congruences; term universes here are small.
      for (size_t i = 0; i < terms_.size(); ++i) {
        for (size_t j = i + 1; j < terms_.size(); ++j) {
          if (find(i) != find(j) && congruent(i, j)) pending_.push_back({i, j, -1});
        }
      }
    }
  }

  size_t find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Input equalities whose closure yields a = b.
  std::vector<size_t> explain(size_t a, size_t b) {
    std::vector<size_t> out;
    explain_into(a, b, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  struct Term {
    std::string symbol;
    std::vector<size_t> args;
  };
  struct Edge {
    size_t a, b;
    long reason;
  };
  struct Reason {
    long input = -1;
    size_t lhs = 0, rhs = 0;  // congruent terms when input < 0
  };

  static std::string key(const GroundTerm& t) { return t.to_string(); }

  bool congruent(size_t i, size_t j) {
    const auto& a = terms_[i];
    const auto& b = terms_[j];
    if (a.symbol != b.symbol || a.args.size() != b.args.size() || a.args.empty()) return false;
    for (size_t k = 0; k < a.args.size(); ++k)
      if (find(a.args[k]) != find(b.args[k])) return false;
    return true;
  }

  // Proof forest: reroot x's tree at x, then hang x below y.
  void add_proof_edge(size_t x, size_t y, long why) {
    std::vector<size_t> path{x};
    while (proof_parent_[path.back()] != path.back()) path.push_back(proof_parent_[path.back()]);
    std::vector<Reason> reasons;
    for (size_t v : path) reasons.push_back(proof_reason_[v]);
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      proof_parent_[path[i + 1]] = path[i];
      proof_reason_[path[i + 1]] = reasons[i];
    }
    proof_parent_[x] = y;
    proof_reason_[x] = Reason{why, x, y};
  }

  std::vector<size_t> ancestors(size_t x) const {
    std::vector<size_t> out{x};
    while (proof_parent_[x] != x) {
      x = proof_parent_[x];
      out.push_back(x);
    }
    return out;
  }

  void explain_into(size_t a, size_t b, std::vector<size_t>& out) {
    if (a == b) return;
    auto pa = ancestors(a);
    auto pb = ancestors(b);
    // Strip the shared suffix above the nearest common ancestor.
    while (!pa.empty() && !pb.empty() && pa.back() == pb.back()) {
      pa.pop_back();
      pb.pop_back();
    }
    for (auto* path : {&pa, &pb}) {
      for (size_t node : *path) {
        const Reason& r = proof_reason_[node];
        if (r.input >= 0) {
          out.push_back(static_cast<size_t>(r.input));
        } else {
          const auto& s = terms_[r.lhs];
          const auto& t = terms_[r.rhs];
          for (size_t k = 0; k < s.args.size(); ++k) explain_into(s.args[k], t.args[k], out);
        }
      }
    }
  }

  std::vector<Term> terms_;
  std::unordered_map<std::string, size_t> ids_;
  std::vector<size_t> parent_;
  std::vector<size_t> proof_parent_;
  std::vector<Reason> proof_reason_;
  std::vector<Edge> pending_;
};

}  // namespace detail

inline std::optional<LiteralSet> cc_consistency(const LiteralSet& s) {
  detail::CongruenceClosure cc;
  std::vector<Literal> lits(s.begin(), s.end());
  std::vector<std::pair<size_t, size_t>> sides;
  for (const auto& l : lits) {
    if (l.atom.kind() != AtomKind::Euf)
      throw TheoryError("non-EUF literal in input: " + l.to_string());
    const auto& e = l.atom.as_euf();
    sides.push_back({cc.add_term(e.lhs), cc.add_term(e.rhs)});
  }
  for (size_t i = 0; i < lits.size(); ++i)
    if (lits[i].positive) cc.merge(sides[i].first, sides[i].second, static_cast<long>(i));
  std::optional<LiteralSet> best;
  for (size_t i = 0; i < lits.size(); ++i) {
    if (lits[i].positive) continue;
    auto [a, b] = sides[i];
    if (cc.find(a) != cc.find(b)) continue;
    std::vector<Literal> cert{lits[i]};
    for (size_t j : cc.explain(a, b)) cert.push_back(lits[j]);
    LiteralSet c(std::move(cert));
    if (!best || c.size() < best->size()) best = std::move(c);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Decision procedures.  Propositional atoms are opaque to every theory and are
// handled by the syntactic check alone.

class SyntacticTheory final : public DecisionProcedure {
 public:
  std::string_view name() const override { return "empty"; }
  bool interprets(const Atom&) const override { return false; }
  std::optional<LiteralSet> consistency(const LiteralSet& s) const override {
    return syntactic_consistency(s);
  }
};

namespace detail {

template <AtomKind Kind, auto Procedure>
class AtomTheory : public DecisionProcedure {
 public:
  bool interprets(const Atom& a) const override { return a.kind() == Kind; }
  std::optional<LiteralSet> consistency(const LiteralSet& s) const override {
    if (auto c = syntactic_consistency(s)) return c;
    std::vector<Literal> mine;
    for (const auto& l : s) {
      if (l.atom.kind() == Kind) {
        mine.push_back(l);
      } else if (!l.atom.is_prop()) {
        throw TheoryError(std::string(name()) + " theory cannot interpret " + l.to_string());
      }
    }
    if (mine.empty()) return std::nullopt;
    return Procedure(LiteralSet::from_sorted(std::move(mine)));
  }
};

}  // namespace detail

class LraTheory final : public detail::AtomTheory<AtomKind::Lin, &lra_consistency> {
 public:
  std::string_view name() const override { return "lra"; }
};

class CcTheory final : public detail::AtomTheory<AtomKind::Euf, &cc_consistency> {
 public:
  std::string_view name() const override { return "cc"; }
};

inline TheoryPtr make_theory(std::string_view name) {
  if (name == "empty") return std::make_shared<SyntacticTheory>();
  if (name == "lra") return std::make_shared<LraTheory>();
  if (name == "cc") return std::make_shared<CcTheory>();
  throw TheoryError("unknown theory: " + std::string(name));
}

inline bool inconsistent(const DecisionProcedure& dp, const LiteralSet& s) {
  return dp.consistency(s).has_value();
}

// l is in mSat(delta) iff delta together with the negation of l is inconsistent.
inline bool m_sat_member(const DecisionProcedure& dp, const LiteralSet& delta, const Literal& l) {
  return inconsistent(dp, delta.with(l.negate()));
}

// nSat restricted to the given atoms, both signs.
inline LiteralSet n_sat(const DecisionProcedure& dp, const LiteralSet& delta,
                        const std::vector<Atom>& atoms) {
  std::vector<Literal> out;
  for (const auto& a : atoms)
    for (bool sign : {true, false})
      if (m_sat_member(dp, delta, Literal{a, sign})) out.push_back(Literal{a, sign});
  return LiteralSet(std::move(out));
}

}  // namespace lkt

#endif  // LKT_THEORIES_HPP
