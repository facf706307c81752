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

// Problem readers: DIMACS CNF and a small SMT-LIB 2 subset.  Both produce the
// represented clause set as a developed sequent; proving it shows the input
// unsatisfiable.

#ifndef LKT_PARSERS_HPP
#define LKT_PARSERS_HPP

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lkt/proof.hpp"
#include "lkt/syntax.hpp"

namespace lkt {

struct ParsedProblem {
  std::optional<Sequent> statement;
  std::optional<bool> expected;  // expected provability
  std::optional<std::string> theory;
  std::vector<Clause> clauses;
  std::vector<std::string> warnings;
};

inline Sequent clause_set_statement(const std::vector<Clause>& phi) {
  std::vector<Formula> g;
  for (const auto& c : phi) g.push_back(represent_clause(c));
  return Sequent::unfocused(FormulaSet(std::move(g)));
}

// ---------------------------------------------------------------------------
// DIMACS

inline std::string dimacs_var(long v) { return "x" + std::to_string(v); }

inline ParsedProblem parse_dimacs(std::string_view text) {
  ParsedProblem out;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t lineno = 0;
  long nvars = -1, nclauses = -1;
  std::vector<Literal> current;
  bool in_clause = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c" || tok[0] == 'c') continue;
    if (tok == "%") break;
    if (tok == "p") {
      if (nvars >= 0) throw ParseError(lineno, "duplicate header");
      std::string fmt;
      if (!(ls >> fmt) || fmt != "cnf") throw ParseError(lineno, "expected 'p cnf <vars> <clauses>'");
      if (!(ls >> nvars >> nclauses) || nvars < 0 || nclauses < 0)
        throw ParseError(lineno, "malformed header counts");
      std::string extra;
      if (ls >> extra) throw ParseError(lineno, "trailing text in header");
      continue;
    }
    if (nvars < 0) throw ParseError(lineno, "clause before header");
    do {
      long v;
      try {
        size_t used = 0;
        v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError(lineno, "bad literal '" + tok + "'");
      }
      if (v == 0) {
        if (!in_clause) throw ParseError(lineno, "empty clause");
        out.clauses.push_back(Clause(std::move(current)));
        current.clear();
        in_clause = false;
        continue;
      }
      long a = v < 0 ? -v : v;
      if (a > nvars) throw ParseError(lineno, "variable " + std::to_string(a) + " exceeds header count");
      current.push_back(prop_lit(dimacs_var(a), v > 0));
      in_clause = true;
    } while (ls >> tok);
  }
  if (nvars < 0) throw ParseError(lineno, "missing 'p cnf' header");
  if (in_clause) throw ParseError(lineno, "last clause is not terminated by 0");
  if (static_cast<long>(out.clauses.size()) != nclauses)
    out.warnings.push_back("header announces " + std::to_string(nclauses) + " clauses, found " +
                           std::to_string(out.clauses.size()));
  out.statement = clause_set_statement(out.clauses);
  return out;
}

inline std::string print_dimacs(const std::vector<Clause>& phi) {
  std::map<std::string, long> index;
  long n = 0;
  auto number = [&](const Literal& l) {
    const std::string& name = l.atom.as_prop().name;
    auto it = index.find(name);
    if (it == index.end()) {
      long v = name.size() > 1 && name[0] == 'x' && name.find_first_not_of("0123456789", 1) == std::string::npos
                   ? std::stol(name.substr(1))
                   : 0;
      it = index.emplace(name, v).first;
    }
    return it->second;
  };
  for (const auto& c : phi)
    for (const auto& l : c) {
      if (!l.atom.is_prop()) throw std::invalid_argument("DIMACS holds propositional atoms only");
      n = std::max(n, number(l));
    }
  // Names that are not x<k> get fresh numbers.
  for (auto& [name, v] : index)
    if (v == 0) v = ++n;
  std::string s = "p cnf " + std::to_string(n) + " " + std::to_string(phi.size()) + "\n";
  for (const auto& c : phi) {
    for (const auto& l : c) s += std::to_string(l.positive ? index[l.atom.as_prop().name] : -index[l.atom.as_prop().name]) + " ";
    s += "0\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Mini SMT-LIB

namespace detail {

// Boolean structure over literals, before clausification.
struct BoolTerm {
  enum Kind { Const, Lit, And, Or } kind = Const;
  bool value = true;
  Literal lit;
  std::vector<BoolTerm> args;

  static BoolTerm constant(bool v) { return {Const, v, {}, {}}; }
  static BoolTerm literal(Literal l) { return {Lit, true, l, {}}; }
};

inline BoolTerm negate(const BoolTerm& t) {
  switch (t.kind) {
    case BoolTerm::Const: return BoolTerm::constant(!t.value);
    case BoolTerm::Lit: return BoolTerm::literal(t.lit.negate());
    case BoolTerm::And:
    case BoolTerm::Or: {
      BoolTerm r{t.kind == BoolTerm::And ? BoolTerm::Or : BoolTerm::And, true, {}, {}};
      for (const auto& a : t.args) r.args.push_back(negate(a));
      return r;
    }
  }
  return t;
}

using Linear = std::map<std::string, Rational>;  // "" holds the constant

class SmtReader {
 public:
  static constexpr size_t clause_cap = 100000;

  ParsedProblem run(std::string_view text) {
    ParsedProblem out;
    bool check_sat = false;
    std::vector<BoolTerm> asserts;
    for (const auto& cmd : parse_sexprs(text)) {
      auto h = cmd.head();
      if (h == "set-logic") {
        if (cmd.list.size() != 2) throw ParseError(cmd.line, "malformed set-logic");
        const std::string& logic = cmd.list[1].atom;
        if (logic == "QF_LRA") out.theory = "lra";
        else if (logic == "QF_UF") out.theory = "cc";
        else throw ParseError(cmd.line, "unsupported logic " + logic);
      } else if (h == "set-info") {
        if (cmd.list.size() == 3 && cmd.list[1].is_atom(":status")) {
          const std::string& st = cmd.list[2].atom;
          if (st == "unsat") out.expected = true;
          else if (st == "sat") out.expected = false;
          else if (st != "unknown") throw ParseError(cmd.line, "unknown status " + st);
        }
      } else if (h == "set-option" || h == "exit") {
      } else if (h == "declare-sort") {
        if (cmd.list.size() < 2 || cmd.list[1].is_list) throw ParseError(cmd.line, "malformed declare-sort");
        sorts_.insert(cmd.list[1].atom);
      } else if (h == "declare-fun" || h == "declare-const") {
        declare(cmd, h == "declare-const");
      } else if (h == "assert") {
        if (cmd.list.size() != 2) throw ParseError(cmd.line, "assert takes one term");
        asserts.push_back(boolean(cmd.list[1]));
      } else if (h == "check-sat") {
        check_sat = true;
      } else {
        throw ParseError(cmd.line, "unsupported command " + (h.empty() ? cmd.to_string() : std::string(h)));
      }
    }
    if (!check_sat || asserts.empty()) return out;
    BoolTerm all{BoolTerm::And, true, {}, std::move(asserts)};
    out.clauses = cnf(all);
    out.statement = clause_set_statement(out.clauses);
    return out;
  }

 private:
  enum class Sort { Bool, Real, Uninterpreted };

  struct Symbol {
    std::vector<Sort> args;
    Sort result;
  };

  Sort sort_of(const SExpr& s) {
    if (s.is_atom("Bool")) return Sort::Bool;
    if (s.is_atom("Real")) return Sort::Real;
    if (!s.is_list && (s.atom == "U" || sorts_.count(s.atom))) return Sort::Uninterpreted;
    throw ParseError(s.line, "unsupported sort " + s.to_string());
  }

  void declare(const SExpr& cmd, bool constant) {
    size_t want = constant ? 3 : 4;
    if (cmd.list.size() != want || cmd.list[1].is_list) throw ParseError(cmd.line, "malformed declaration");
    Symbol sym;
    if (!constant) {
      if (!cmd.list[2].is_list) throw ParseError(cmd.line, "malformed argument sorts");
      for (const auto& a : cmd.list[2].list) sym.args.push_back(sort_of(a));
    }
    sym.result = sort_of(cmd.list.back());
    for (auto a : sym.args)
      if (a != Sort::Uninterpreted) throw ParseError(cmd.line, "function arguments must be uninterpreted");
    if (!sym.args.empty() && sym.result != Sort::Uninterpreted)
      throw ParseError(cmd.line, "only uninterpreted functions may take arguments");
    symbols_[cmd.list[1].atom] = sym;
  }

  const Symbol* lookup(const std::string& name) const {
    auto it = symbols_.find(name);
    return it == symbols_.end() ? nullptr : &it->second;
  }

  BoolTerm boolean(const SExpr& e) {
    if (!e.is_list) {
      if (e.atom == "true") return BoolTerm::constant(true);
      if (e.atom == "false") return BoolTerm::constant(false);
      const Symbol* s = lookup(e.atom);
      if (!s || s->result != Sort::Bool || !s->args.empty()) throw ParseError(e.line, "unknown boolean " + e.atom);
      return BoolTerm::literal(prop_lit(e.atom));
    }
    auto h = e.head();
    if (h == "not") {
      if (e.list.size() != 2) throw ParseError(e.line, "not takes one argument");
      return negate(boolean(e.list[1]));
    }
    if (h == "and" || h == "or") {
      BoolTerm r{h == "and" ? BoolTerm::And : BoolTerm::Or, true, {}, {}};
      for (size_t i = 1; i < e.list.size(); ++i) r.args.push_back(boolean(e.list[i]));
      return r;
    }
    if (h == "<" || h == "<=" || h == ">" || h == ">=" || h == "=") {
      if (e.list.size() != 3) throw ParseError(e.line, std::string(h) + " takes two arguments");
      if (h == "=" && is_uninterpreted(e.list[1]))
        return BoolTerm::literal(Literal{Atom::eq(term(e.list[1]), term(e.list[2])), true});
      return comparison(h, linear(e.list[1]), linear(e.list[2]), e.line);
    }
    throw ParseError(e.line, "unsupported construct " + (h.empty() ? e.to_string() : std::string(h)));
  }

  bool is_uninterpreted(const SExpr& e) const {
    const std::string& name = e.is_list ? e.list.at(0).atom : e.atom;
    const Symbol* s = lookup(name);
    return s && s->result == Sort::Uninterpreted;
  }

  GroundTerm term(const SExpr& e) {
    const std::string& name = e.is_list ? (e.list.empty() ? e.atom : e.list[0].atom) : e.atom;
    const Symbol* s = lookup(name);
    if (!s || s->result != Sort::Uninterpreted) throw ParseError(e.line, "unknown term " + e.to_string());
    size_t given = e.is_list ? e.list.size() - 1 : 0;
    if (given != s->args.size()) throw ParseError(e.line, "wrong arity for " + name);
    std::vector<GroundTerm> args;
    for (size_t i = 0; i < given; ++i) args.push_back(term(e.list[i + 1]));
    return GroundTerm::make(name, std::move(args));
  }

  Linear linear(const SExpr& e) {
    if (!e.is_list) {
      if (is_number(e.atom)) return Linear{{"", parse_rational(e.atom, e.line)}};
      const Symbol* s = lookup(e.atom);
      if (!s || s->result != Sort::Real) throw ParseError(e.line, "unknown real " + e.atom);
      return Linear{{e.atom, Rational(1)}};
    }
    auto h = e.head();
    if (h == "+" || h == "-") {
      if (e.list.size() < 2) throw ParseError(e.line, "empty sum");
      Linear acc = linear(e.list[1]);
      if (h == "-" && e.list.size() == 2) return scale(acc, -1);
      for (size_t i = 2; i < e.list.size(); ++i) add(acc, scale(linear(e.list[i]), h == "-" ? -1 : 1));
      return acc;
    }
    if (h == "*") {
      Linear acc{{"", Rational(1)}};
      for (size_t i = 1; i < e.list.size(); ++i) {
        Linear f = linear(e.list[i]);
        if (is_constant(f)) acc = scale(acc, f[""]);
        else if (is_constant(acc)) acc = scale(f, acc[""]);
        else throw ParseError(e.line, "non-linear product");
      }
      return acc;
    }
    if (h == "/") {
      if (e.list.size() != 3) throw ParseError(e.line, "/ takes two arguments");
      Linear num = linear(e.list[1]), den = linear(e.list[2]);
      if (!is_constant(den) || den[""] == 0) throw ParseError(e.line, "division by a non-constant or zero");
      return scale(num, 1 / den[""]);
    }
    throw ParseError(e.line, "unsupported arithmetic " + e.to_string());
  }

  static bool is_constant(const Linear& l) {
    for (const auto& [x, k] : l)
      if (!x.empty() && k != 0) return false;
    return true;
  }
  static Linear scale(Linear l, const Rational& k) {
    for (auto& [x, c] : l) c *= k;
    return l;
  }
  static void add(Linear& a, const Linear& b) {
    for (const auto& [x, c] : b) a[x] += c;
  }

  // lhs h rhs, as a literal whose atom has leading coefficient 1.
  static BoolTerm comparison(std::string_view h, Linear lhs, const Linear& rhs, size_t line) {
    add(lhs, scale(rhs, -1));
    Rational bound = -lhs[""];
    lhs.erase("");
    std::map<std::string, Rational> coeffs;
    for (const auto& [x, c] : lhs)
      if (c != 0) coeffs[x] = c;
    // e < b is not(e >= b); e <= b is not(e > b).
    bool positive = !(h == "<" || h == "<=");
    Relation rel = h == "=" ? Relation::Equal : (h == ">" || h == "<=") ? Relation::Greater : Relation::GreaterEq;
    if (coeffs.empty()) {
      bool v = rel == Relation::Greater ? 0 > bound : rel == Relation::GreaterEq ? 0 >= bound : bound == 0;
      return BoolTerm::constant(v == positive);
    }
    // Leading coefficient of the natural variable order.
    auto lead = std::min_element(coeffs.begin(), coeffs.end(), [](const auto& a, const auto& b) {
                  return natural_compare(a.first, b.first) < 0;
                })->second;
    Rational k = lead < 0 ? Rational(-lead) : lead;
    for (auto& [x, c] : coeffs) c /= k;
    bound /= k;
    if (lead < 0) {
      for (auto& [x, c] : coeffs) c = -c;
      bound = -bound;
      // -e > b is e < -b, i.e. not(e >= -b); -e >= b is not(e > -b).
      if (rel != Relation::Equal) {
        rel = rel == Relation::Greater ? Relation::GreaterEq : Relation::Greater;
        positive = !positive;
      }
    }
    (void)line;
    return BoolTerm::literal(Literal{Atom::lin(std::move(coeffs), rel, bound), positive});
  }

  // Clauses of an NNF term by distribution; tautologies are dropped.
  std::vector<Clause> cnf(const BoolTerm& t) {
    std::vector<std::vector<Literal>> raw = clauses_of(t);
    std::set<Clause> seen;
    std::vector<Clause> out;
    for (auto& c : raw) {
      Clause cl(std::move(c));
      bool taut = false;
      for (const auto& l : cl) taut |= cl.contains(l.negate());
      if (!taut && seen.insert(cl).second) out.push_back(cl);
    }
    return out;
  }

  std::vector<std::vector<Literal>> clauses_of(const BoolTerm& t) {
    switch (t.kind) {
      case BoolTerm::Const: return t.value ? std::vector<std::vector<Literal>>{} : std::vector<std::vector<Literal>>{{}};
      case BoolTerm::Lit: return {{t.lit}};
      case BoolTerm::And: {
        std::vector<std::vector<Literal>> out;
        for (const auto& a : t.args) {
          auto sub = clauses_of(a);
          out.insert(out.end(), sub.begin(), sub.end());
          if (out.size() > clause_cap) throw ParseError(1, "clause form exceeds " + std::to_string(clause_cap) + " clauses");
        }
        return out;
      }
      case BoolTerm::Or: {
        std::vector<std::vector<Literal>> acc{{}};
        for (const auto& a : t.args) {
          auto sub = clauses_of(a);
          std::vector<std::vector<Literal>> next;
          for (const auto& x : acc)
            for (const auto& y : sub) {
              auto c = x;
              c.insert(c.end(), y.begin(), y.end());
              next.push_back(std::move(c));
            }
          if (next.size() > clause_cap) throw ParseError(1, "clause form exceeds " + std::to_string(clause_cap) + " clauses");
          acc = std::move(next);
        }
        return acc;
      }
    }
    return {};
  }

  std::map<std::string, Symbol> symbols_;
  std::set<std::string> sorts_;
};

}  // namespace detail

inline ParsedProblem parse_mini_smt(std::string_view text) { return detail::SmtReader().run(text); }

}  // namespace lkt

#endif  // LKT_PARSERS_HPP
