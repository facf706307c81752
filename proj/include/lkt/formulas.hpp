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

// Polarised propositional formulae over three kinds of atoms.

#ifndef LKT_FORMULAS_HPP
#define LKT_FORMULAS_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "lkt/sorted_set.hpp"

namespace lkt {

using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) { return r.str(); }

namespace detail {

inline size_t hash_mix(size_t seed, size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

// Compares names so that embedded digit runs are ordered numerically (x2 < x10).
inline std::strong_ordering natural_compare(const std::string& a, const std::string& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      size_t is = i, js = j;
      while (is + 1 < ie && a[is] == '0') ++is;
      while (js + 1 < je && b[js] == '0') ++js;
      if (auto c = (ie - is) <=> (je - js); c != 0) return c;
      if (int c = a.compare(is, ie - is, b, js, je - js); c != 0) return c <=> 0;
      if (auto c = (ie - i) <=> (je - j); c != 0) return c;
      i = ie;
      j = je;
      continue;
    }
    if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) <=> static_cast<unsigned char>(b[j]);
    ++i;
    ++j;
  }
  return (a.size() - i) <=> (b.size() - j);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ground terms

class GroundTerm {
 public:
  GroundTerm() = default;
  static GroundTerm make(std::string symbol, std::vector<GroundTerm> args = {}) {
    auto node = std::make_shared<Node>();
    node->symbol = std::move(symbol);
    node->args = std::move(args);
    size_t h = std::hash<std::string>{}(node->symbol);
    for (const auto& a : node->args) h = detail::hash_mix(h, a.hash());
    node->hash = h;
    GroundTerm t;
    t.node_ = std::move(node);
    return t;
  }

  const std::string& symbol() const { return node_->symbol; }
  const std::vector<GroundTerm>& args() const { return node_->args; }
  size_t hash() const { return node_->hash; }

  friend bool operator==(const GroundTerm& a, const GroundTerm& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.symbol() != b.symbol()) return false;
    return a.args() == b.args();
  }
  friend std::strong_ordering operator<=>(const GroundTerm& a, const GroundTerm& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.args().size() <=> b.args().size(); c != 0) return c;
    if (auto c = detail::natural_compare(a.symbol(), b.symbol()); c != 0) return c;
    for (size_t i = 0; i < a.args().size(); ++i)
      if (auto c = a.args()[i] <=> b.args()[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

  std::string to_string() const {
    if (args().empty()) return symbol();
    std::string s = "(" + symbol();
    for (const auto& a : args()) s += " " + a.to_string();
    return s + ")";
  }

 private:
  struct Node {
    std::string symbol;
    std::vector<GroundTerm> args;
    size_t hash = 0;
  };
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Atoms

enum class Relation : uint8_t { Greater, GreaterEq, Equal };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::Greater: return ">";
    case Relation::GreaterEq: return ">=";
    case Relation::Equal: return "=";
  }
  return "?";
}

struct PropVar {
  std::string name;
  friend bool operator==(const PropVar&, const PropVar&) = default;
};

// sum(coeffs[x] * x) relation bound
struct LinConstraint {
  std::map<std::string, Rational> coeffs;
  Rational bound;
  Relation relation = Relation::Greater;
  friend bool operator==(const LinConstraint&, const LinConstraint&) = default;
};

struct EufEq {
  GroundTerm lhs, rhs;
  friend bool operator==(const EufEq&, const EufEq&) = default;
};

enum class AtomKind : uint8_t { Prop, Lin, Euf };

// Interned handle: structurally equal atoms share one node, so equality is
// pointer equality.
class Atom {
 public:
  using Data = std::variant<PropVar, LinConstraint, EufEq>;

  Atom() = default;

  static Atom prop(std::string name) { return intern(PropVar{std::move(name)}); }
  static Atom lin(std::map<std::string, Rational> coeffs, Relation rel, Rational bound) {
    std::erase_if(coeffs, [](const auto& kv) { return kv.second == 0; });
    return intern(LinConstraint{std::move(coeffs), std::move(bound), rel});
  }
  // Equalities are symmetric; the sides are stored in canonical order.
  static Atom eq(GroundTerm lhs, GroundTerm rhs) {
    if (rhs < lhs) std::swap(lhs, rhs);
    return intern(EufEq{std::move(lhs), std::move(rhs)});
  }

  const Data& data() const { return node_->data; }
  AtomKind kind() const { return static_cast<AtomKind>(node_->data.index()); }
  bool is_prop() const { return kind() == AtomKind::Prop; }
  const PropVar& as_prop() const { return std::get<PropVar>(data()); }
  const LinConstraint& as_lin() const { return std::get<LinConstraint>(data()); }
  const EufEq& as_euf() const { return std::get<EufEq>(data()); }
  size_t hash() const { return node_->hash; }
  bool valid() const { return node_ != nullptr; }
  const void* identity() const { return node_; }

  friend bool operator==(Atom a, Atom b) { return a.node_ == b.node_; }
  friend std::strong_ordering operator<=>(Atom a, Atom b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.data().index() <=> b.data().index(); c != 0) return c;
    switch (a.kind()) {
      case AtomKind::Prop: return detail::natural_compare(a.as_prop().name, b.as_prop().name);
      case AtomKind::Lin: return compare_lin(a.as_lin(), b.as_lin());
      case AtomKind::Euf: {
        const auto& x = a.as_euf();
        const auto& y = b.as_euf();
        if (auto c = x.lhs <=> y.lhs; c != 0) return c;
        return x.rhs <=> y.rhs;
      }
    }
    return std::strong_ordering::equal;
  }

  std::string to_string() const {
    switch (kind()) {
      case AtomKind::Prop: return as_prop().name;
      case AtomKind::Lin: {
        const auto& c = as_lin();
        std::string s = std::string("(") + lkt::to_string(c.relation) + " (+";
        for (const auto& [x, k] : c.coeffs) s += " (* " + lkt::to_string(k) + " " + x + ")";
        return s + ") " + lkt::to_string(c.bound) + ")";
      }
      case AtomKind::Euf:
        return "(= " + as_euf().lhs.to_string() + " " + as_euf().rhs.to_string() + ")";
    }
    return "?";
  }

 private:
  struct Node {
    Data data;
    size_t hash = 0;
  };
  struct NodeHash {
    using is_transparent = void;
    size_t operator()(const std::unique_ptr<Node>& n) const { return n->hash; }
  };
  struct NodeEq {
    bool operator()(const std::unique_ptr<Node>& a, const std::unique_ptr<Node>& b) const {
      return a->data == b->data;
    }
  };

  static std::strong_ordering compare_lin(const LinConstraint& a, const LinConstraint& b) {
    auto ia = a.coeffs.begin(), ib = b.coeffs.begin();
    for (; ia != a.coeffs.end() && ib != b.coeffs.end(); ++ia, ++ib) {
      if (auto c = detail::natural_compare(ia->first, ib->first); c != 0) return c;
      if (ia->second != ib->second) return ia->second < ib->second ? std::strong_ordering::less
                                                                   : std::strong_ordering::greater;
    }
    if (auto c = a.coeffs.size() <=> b.coeffs.size(); c != 0) return c;
    if (auto c = a.relation <=> b.relation; c != 0) return c;
    if (a.bound != b.bound)
      return a.bound < b.bound ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  static size_t hash_data(const Data& d) {
    size_t h = d.index();
    std::visit(
        [&](const auto& v) {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, PropVar>) {
            h = detail::hash_mix(h, std::hash<std::string>{}(v.name));
          } else if constexpr (std::is_same_v<V, LinConstraint>) {
            for (const auto& [x, k] : v.coeffs) {
              h = detail::hash_mix(h, std::hash<std::string>{}(x));
              h = detail::hash_mix(h, std::hash<std::string>{}(k.str()));
            }
            h = detail::hash_mix(h, std::hash<std::string>{}(v.bound.str()));
            h = detail::hash_mix(h, static_cast<size_t>(v.relation));
          } else {
            h = detail::hash_mix(h, v.lhs.hash());
            h = detail::hash_mix(h, v.rhs.hash());
          }
        },
        d);
    return h;
  }

  static Atom intern(Data d) {
    static std::mutex mu;
    static std::unordered_set<std::unique_ptr<Node>, NodeHash, NodeEq> table;
    auto node = std::make_unique<Node>();
    node->hash = hash_data(d);
    node->data = std::move(d);
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = table.insert(std::move(node));
    Atom a;
    a.node_ = it->get();
    return a;
  }

  const Node* node_ = nullptr;
};

// ---------------------------------------------------------------------------
// Literals

struct Literal {
  Atom atom;
  bool positive = true;

  Literal negate() const { return Literal{atom, !positive}; }
  Literal operator~() const { return negate(); }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
    if (auto c = a.atom <=> b.atom; c != 0) return c;
    return b.positive <=> a.positive;
  }
  size_t hash() const { return detail::hash_mix(atom.hash(), positive ? 1 : 2); }

  std::string to_string() const {
    return positive ? atom.to_string() : "(not " + atom.to_string() + ")";
  }
};

inline Literal prop_lit(const std::string& name, bool positive = true) {
  return Literal{Atom::prop(name), positive};
}

using LiteralSet = SortedSet<Literal>;

// A clause is a finite set of literals; the empty clause is falsity.
using Clause = LiteralSet;

inline size_t clause_set_size(const std::vector<Clause>& phi) {
  size_t n = 0;
  for (const auto& c : phi) n += c.size();
  return n;
}

// ---------------------------------------------------------------------------
// Polarisation sets

enum class Polarity : uint8_t { PPositive, PNegative, Unpolarised };

class PolarisationSet {
 public:
  PolarisationSet() = default;
  explicit PolarisationSet(LiteralSet positives) : positives_(std::move(positives)) {
    for (const auto& l : positives_)
      if (positives_.contains(l.negate()))
        throw std::invalid_argument("polarisation set contains " + l.to_string() + " and its negation");
  }

  bool contains(const Literal& l) const { return positives_.contains(l); }
  Polarity classify(const Literal& l) const {
    if (positives_.contains(l)) return Polarity::PPositive;
    if (positives_.contains(l.negate())) return Polarity::PNegative;
    return Polarity::Unpolarised;
  }
  // Adds an unpolarised literal; polarised ones leave the set unchanged.
  PolarisationSet polar(const Literal& l) const {
    if (classify(l) != Polarity::Unpolarised) return *this;
    PolarisationSet p = *this;
    p.positives_.insert(l);
    return p;
  }
  const LiteralSet& literals() const { return positives_; }
  size_t size() const { return positives_.size(); }
  bool subset_of(const PolarisationSet& o) const { return positives_.subset_of(o.positives_); }

  friend bool operator==(const PolarisationSet&, const PolarisationSet&) = default;

 private:
  LiteralSet positives_;
};

// ---------------------------------------------------------------------------
// Formulae

enum class Connective : uint8_t {
  Lit,
  AndPos,
  OrPos,
  TruePos,
  FalsePos,
  AndNeg,
  OrNeg,
  TrueNeg,
  FalseNeg,
};

inline bool is_binary(Connective c) {
  return c == Connective::AndPos || c == Connective::OrPos || c == Connective::AndNeg ||
         c == Connective::OrNeg;
}

struct FormulaNode;

class Formula {
 public:
  Formula() = default;

  static Formula lit(Literal l);
  static Formula lit(const std::string& prop_name, bool positive = true) {
    return lit(prop_lit(prop_name, positive));
  }
  static Formula binary(Connective c, Formula a, Formula b);
  static Formula constant(Connective c);
  static Formula and_pos(Formula a, Formula b) { return binary(Connective::AndPos, a, b); }
  static Formula or_pos(Formula a, Formula b) { return binary(Connective::OrPos, a, b); }
  static Formula and_neg(Formula a, Formula b) { return binary(Connective::AndNeg, a, b); }
  static Formula or_neg(Formula a, Formula b) { return binary(Connective::OrNeg, a, b); }
  static Formula true_pos() { return constant(Connective::TruePos); }
  static Formula false_pos() { return constant(Connective::FalsePos); }
  static Formula true_neg() { return constant(Connective::TrueNeg); }
  static Formula false_neg() { return constant(Connective::FalseNeg); }

  inline Connective connective() const;
  bool is_literal() const { return connective() == Connective::Lit; }
  inline const Literal& literal() const;
  inline const Formula& left() const;
  inline const Formula& right() const;
  inline size_t size() const;
  inline size_t hash() const;
  bool valid() const { return node_ != nullptr; }

  // Positive connectives are those whose introduction rule involves a choice.
  bool positive_connective() const {
    switch (connective()) {
      case Connective::AndPos:
      case Connective::OrPos:
      case Connective::TruePos:
      case Connective::FalsePos: return true;
      default: return false;
    }
  }
  bool negative_connective() const { return !is_literal() && !positive_connective(); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.connective() != b.connective() || a.size() != b.size())
      return false;
    if (a.is_literal()) return a.literal() == b.literal();
    if (is_binary(a.connective())) return a.left() == b.left() && a.right() == b.right();
    return true;
  }
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.connective() <=> b.connective(); c != 0) return c;
    if (a.is_literal()) return a.literal() <=> b.literal();
    if (!is_binary(a.connective())) return std::strong_ordering::equal;
    if (auto c = a.left() <=> b.left(); c != 0) return c;
    return a.right() <=> b.right();
  }

  std::string to_string() const {
    switch (connective()) {
      case Connective::Lit: return literal().to_string();
      case Connective::TruePos: return "true+";
      case Connective::FalsePos: return "false+";
      case Connective::TrueNeg: return "true-";
      case Connective::FalseNeg: return "false-";
      case Connective::AndPos: return "(and+ " + left().to_string() + " " + right().to_string() + ")";
      case Connective::OrPos: return "(or+ " + left().to_string() + " " + right().to_string() + ")";
      case Connective::AndNeg: return "(and- " + left().to_string() + " " + right().to_string() + ")";
      case Connective::OrNeg: return "(or- " + left().to_string() + " " + right().to_string() + ")";
    }
    return "?";
  }

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  Connective connective = Connective::TrueNeg;
  Literal literal;
  Formula left, right;
  size_t size = 1;
  size_t hash = 0;
};

inline Connective Formula::connective() const { return node_->connective; }
inline const Literal& Formula::literal() const {
  assert(is_literal());
  return node_->literal;
}
inline const Formula& Formula::left() const { return node_->left; }
inline const Formula& Formula::right() const { return node_->right; }
inline size_t Formula::size() const { return node_->size; }
inline size_t Formula::hash() const { return node_->hash; }

inline Formula Formula::lit(Literal l) {
  auto n = std::make_shared<FormulaNode>();
  n->connective = Connective::Lit;
  n->literal = l;
  n->hash = l.hash();
  return Formula(std::move(n));
}

inline Formula Formula::binary(Connective c, Formula a, Formula b) {
  assert(is_binary(c));
  auto n = std::make_shared<FormulaNode>();
  n->connective = c;
  n->size = 1 + a.size() + b.size();
  n->hash = detail::hash_mix(detail::hash_mix(static_cast<size_t>(c) * 7919, a.hash()), b.hash());
  n->left = std::move(a);
  n->right = std::move(b);
  return Formula(std::move(n));
}

inline Formula Formula::constant(Connective c) {
  assert(!is_binary(c) && c != Connective::Lit);
  auto n = std::make_shared<FormulaNode>();
  n->connective = c;
  n->hash = static_cast<size_t>(c) * 104729;
  return Formula(std::move(n));
}

using FormulaSet = SortedSet<Formula>;

inline Connective dual(Connective c) {
  switch (c) {
    case Connective::AndPos: return Connective::OrNeg;
    case Connective::OrPos: return Connective::AndNeg;
    case Connective::TruePos: return Connective::FalseNeg;
    case Connective::FalsePos: return Connective::TrueNeg;
    case Connective::AndNeg: return Connective::OrPos;
    case Connective::OrNeg: return Connective::AndPos;
    case Connective::TrueNeg: return Connective::FalsePos;
    case Connective::FalseNeg: return Connective::TruePos;
    case Connective::Lit: return Connective::Lit;
  }
  return c;
}

// De Morgan dual; involutive and size preserving.
inline Formula negate_formula(const Formula& a) {
  switch (a.connective()) {
    case Connective::Lit: return Formula::lit(a.literal().negate());
    case Connective::AndPos:
    case Connective::OrPos:
    case Connective::AndNeg:
    case Connective::OrNeg:
      return Formula::binary(dual(a.connective()), negate_formula(a.left()),
                             negate_formula(a.right()));
    default: return Formula::constant(dual(a.connective()));
  }
}

inline Polarity classify(const Formula& a, const PolarisationSet& p) {
  if (a.is_literal()) return p.classify(a.literal());
  return a.positive_connective() ? Polarity::PPositive : Polarity::PNegative;
}

inline PolarisationSet polar(const PolarisationSet& p, const Formula& a) {
  return a.is_literal() ? p.polar(a.literal()) : p;
}

inline size_t size(const Formula& a) { return a.size(); }

// l1 or- (l2 or- (... or- false-)) with literals in canonical order.
inline Formula represent_clause(const Clause& c) {
  Formula f = Formula::false_neg();
  for (auto it = c.items().rbegin(); it != c.items().rend(); ++it)
    f = Formula::or_neg(Formula::lit(*it), f);
  return f;
}

// Inverse of represent_clause; nullopt when `f` is not a represented clause.
inline std::optional<Clause> clause_of(const Formula& f) {
  std::vector<Literal> lits;
  const Formula* cur = &f;
  while (cur->connective() == Connective::OrNeg && cur->left().is_literal()) {
    lits.push_back(cur->left().literal());
    cur = &cur->right();
  }
  if (cur->connective() != Connective::FalseNeg) return std::nullopt;
  Clause c(lits);
  if (c.size() != lits.size() || !std::is_sorted(lits.begin(), lits.end())) return std::nullopt;
  return c;
}

template <typename F>
void for_each_literal(const Formula& a, F&& f) {
  if (a.is_literal()) {
    f(a.literal());
  } else if (is_binary(a.connective())) {
    for_each_literal(a.left(), f);
    for_each_literal(a.right(), f);
  }
}

// l occurs in a when l or its negation is a literal leaf of a.
inline bool occurs_in(const Literal& l, const Formula& a) {
  if (a.is_literal()) return a.literal().atom == l.atom;
  if (!is_binary(a.connective())) return false;
  return occurs_in(l, a.left()) || occurs_in(l, a.right());
}

inline bool occurs_in(const Literal& l, const FormulaSet& gamma) {
  for (const auto& f : gamma)
    if (occurs_in(l, f)) return true;
  return false;
}

// Literal members of gamma that are positive for p.
inline LiteralSet atm(const FormulaSet& gamma, const PolarisationSet& p) {
  std::vector<Literal> out;
  for (const auto& f : gamma) {
    if (!f.is_literal()) break;  // literals sort first
    if (p.contains(f.literal())) out.push_back(f.literal());
  }
  return LiteralSet::from_sorted(std::move(out));
}

inline std::string to_string(const LiteralSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& l : s) {
    if (!first) out += ", ";
    out += l.to_string();
    first = false;
  }
  return out + "}";
}

}  // namespace lkt

#endif  // LKT_FORMULAS_HPP
