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

// S-expressions, and reading back the printed form of formulae.

#ifndef LKT_SYNTAX_HPP
#define LKT_SYNTAX_HPP

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lkt/formulas.hpp"

namespace lkt {

struct ParseError : std::runtime_error {
  ParseError(size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  size_t line;
};

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
  size_t line = 1;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  // Head symbol of a non-empty list, or "".
  std::string_view head() const {
    return is_list && !list.empty() && !list[0].is_list ? std::string_view(list[0].atom) : std::string_view();
  }
  std::string to_string() const {
    if (!is_list) return atom;
    std::string s = "(";
    for (size_t i = 0; i < list.size(); ++i) s += (i ? " " : "") + list[i].to_string();
    return s + ")";
  }
};

namespace detail {

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  std::vector<SExpr> all() {
    std::vector<SExpr> out;
    for (skip(); pos_ < text_.size(); skip()) out.push_back(read());
    return out;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    char c = text_[pos_];
    if (c == ')') throw ParseError(line_, "unexpected ')'");
    if (c == '(') {
      ++pos_;
      e.is_list = true;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) throw ParseError(e.line, "unbalanced '('");
        if (text_[pos_] == ')') {
          ++pos_;
          return e;
        }
        e.list.push_back(read());
      }
    }
    if (c == '|') {
      size_t end = text_.find('|', pos_ + 1);
      if (end == std::string_view::npos) throw ParseError(line_, "unterminated quoted symbol");
      e.atom = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return e;
    }
    if (c == '"') {
      size_t end = text_.find('"', pos_ + 1);
      if (end == std::string_view::npos) throw ParseError(line_, "unterminated string");
      e.atom = std::string(text_.substr(pos_, end - pos_ + 1));
      pos_ = end + 1;
      return e;
    }
    size_t start = pos_;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') break;
      ++pos_;
    }
    e.atom = std::string(text_.substr(start, pos_ - start));
    return e;
  }

  std::string_view text_;
  size_t pos_ = 0;
  size_t line_ = 1;
};

inline bool is_number(std::string_view s) {
  if (s.empty()) return false;
  size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  bool digits = false, slash = false, dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) digits = true;
    else if (c == '/' && !slash && !dot && digits) slash = true;
    else if (c == '.' && !slash && !dot && digits) dot = true;
    else return false;
  }
  return digits && s.back() != '/' && s.back() != '.';
}

}  // namespace detail

inline std::vector<SExpr> parse_sexprs(std::string_view text) { return detail::SExprReader(text).all(); }

inline SExpr parse_sexpr(std::string_view text) {
  auto all = parse_sexprs(text);
  if (all.size() != 1) throw ParseError(1, "expected exactly one expression");
  return all.front();
}

// Reads integers, fractions "p/q" and decimals "1.25".
inline Rational parse_rational(std::string_view s, size_t line = 1) {
  if (!detail::is_number(s)) throw ParseError(line, "not a number: " + std::string(s));
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string digits(s.substr(0, dot));
    std::string frac(s.substr(dot + 1));
    bool neg = !digits.empty() && digits[0] == '-';
    if (neg) digits.erase(0, 1);
    Rational den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational r = Rational(boost::multiprecision::cpp_int(digits + frac)) / den;
    return neg ? Rational(-r) : r;
  }
  return Rational(std::string(s));
}

inline GroundTerm term_from_sexpr(const SExpr& e) {
  if (!e.is_list) return GroundTerm::make(e.atom);
  if (e.list.empty() || e.list[0].is_list) throw ParseError(e.line, "malformed term " + e.to_string());
  std::vector<GroundTerm> args;
  for (size_t i = 1; i < e.list.size(); ++i) args.push_back(term_from_sexpr(e.list[i]));
  return GroundTerm::make(e.list[0].atom, std::move(args));
}

// Inverse of Atom::to_string.
inline Atom atom_from_sexpr(const SExpr& e) {
  if (!e.is_list) {
    if (e.atom.empty() || detail::is_number(e.atom)) throw ParseError(e.line, "bad atom " + e.atom);
    return Atom::prop(e.atom);
  }
  auto h = e.head();
  if (e.list.size() == 3 && (h == ">" || h == ">=" || h == "=")) {
    const SExpr& lhs = e.list[1];
    const SExpr& rhs = e.list[2];
    if (lhs.head() == "+" && !rhs.is_list && detail::is_number(rhs.atom)) {
      std::map<std::string, Rational> coeffs;
      for (size_t i = 1; i < lhs.list.size(); ++i) {
        const SExpr& m = lhs.list[i];
        if (m.head() != "*" || m.list.size() != 3 || m.list[1].is_list || m.list[2].is_list)
          throw ParseError(m.line, "malformed monomial " + m.to_string());
        coeffs[m.list[2].atom] += parse_rational(m.list[1].atom, m.line);
      }
      Relation rel = h == ">" ? Relation::Greater : h == ">=" ? Relation::GreaterEq : Relation::Equal;
      return Atom::lin(std::move(coeffs), rel, parse_rational(rhs.atom, rhs.line));
    }
    if (h == "=") return Atom::eq(term_from_sexpr(lhs), term_from_sexpr(rhs));
  }
  throw ParseError(e.line, "not an atom: " + e.to_string());
}

inline Literal literal_from_sexpr(const SExpr& e) {
  if (e.head() == "not" && e.list.size() == 2) return Literal{atom_from_sexpr(e.list[1]), false};
  return Literal{atom_from_sexpr(e), true};
}

inline Formula formula_from_sexpr(const SExpr& e) {
  if (!e.is_list) {
    if (e.atom == "true+") return Formula::true_pos();
    if (e.atom == "false+") return Formula::false_pos();
    if (e.atom == "true-") return Formula::true_neg();
    if (e.atom == "false-") return Formula::false_neg();
  }
  auto h = e.head();
  static const std::pair<std::string_view, Connective> binaries[] = {{"and+", Connective::AndPos},
                                                                     {"or+", Connective::OrPos},
                                                                     {"and-", Connective::AndNeg},
                                                                     {"or-", Connective::OrNeg}};
  for (const auto& [name, c] : binaries)
    if (h == name) {
      if (e.list.size() != 3) throw ParseError(e.line, std::string(name) + " takes two arguments");
      return Formula::binary(c, formula_from_sexpr(e.list[1]), formula_from_sexpr(e.list[2]));
    }
  return Formula::lit(literal_from_sexpr(e));
}

inline Formula parse_formula(std::string_view text) { return formula_from_sexpr(parse_sexpr(text)); }
inline Literal parse_literal(std::string_view text) { return literal_from_sexpr(parse_sexpr(text)); }

}  // namespace lkt

#endif  // LKT_SYNTAX_HPP
