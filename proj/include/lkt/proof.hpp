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

// Sequents and (possibly incomplete) proof trees.

#ifndef LKT_PROOF_HPP
#define LKT_PROOF_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lkt/formulas.hpp"

namespace lkt {

// Either  gamma |- delta  (unfocused) or  gamma |- [focus]  (focused), both
// relative to a polarisation set.
class Sequent {
 public:
  Sequent() = default;

  static Sequent unfocused(FormulaSet gamma, std::vector<Formula> delta = {},
                           PolarisationSet pol = {}) {
    Sequent s;
    s.gamma_ = std::move(gamma);
    s.delta_ = std::move(delta);
    s.pol_ = std::move(pol);
    return s;
  }
  static Sequent focused(FormulaSet gamma, Formula focus, PolarisationSet pol) {
    Sequent s;
    s.gamma_ = std::move(gamma);
    s.focus_ = std::move(focus);
    s.pol_ = std::move(pol);
    return s;
  }

  bool is_focused() const { return focus_.valid(); }
  bool developed() const { return !is_focused() && delta_.empty(); }
  const FormulaSet& gamma() const { return gamma_; }
  const std::vector<Formula>& delta() const { return delta_; }
  const Formula& focus() const { return focus_; }
  const PolarisationSet& pol() const { return pol_; }

  Sequent with_gamma(FormulaSet g) const {
    Sequent s = *this;
    s.gamma_ = std::move(g);
    return s;
  }

  // Sum of the sizes of all formulae in the sequent.
  size_t weight() const {
    size_t w = 0;
    for (const auto& f : gamma_) w += f.size();
    for (const auto& f : delta_) w += f.size();
    if (is_focused()) w += focus_.size();
    return w;
  }

  friend bool operator==(const Sequent& a, const Sequent& b) {
    return a.is_focused() == b.is_focused() && a.gamma_ == b.gamma_ && a.pol_ == b.pol_ &&
           a.delta_ == b.delta_ && (!a.is_focused() || a.focus_ == b.focus_);
  }

  std::string to_string() const {
    std::string s;
    bool first = true;
    for (const auto& f : gamma_) {
      s += first ? "" : ", ";
      s += f.to_string();
      first = false;
    }
    s += s.empty() ? "|-" : " |-";
    if (is_focused()) {
      s += " [" + focus_.to_string() + "]";
    } else {
      first = true;
      for (const auto& f : delta_) {
        s += first ? " " : ", ";
        s += f.to_string();
        first = false;
      }
    }
    if (!pol_.literals().empty()) s += "  @ " + lkt::to_string(pol_.literals());
    return s;
  }

 private:
  FormulaSet gamma_;
  std::vector<Formula> delta_;
  Formula focus_;
  PolarisationSet pol_;
};

// gamma may only hold negative formulae (polarised literals count as such
// when negative) and positive literals; never unpolarised literals or
// positive connectives.
inline bool gamma_well_formed(const FormulaSet& gamma, const PolarisationSet& pol) {
  for (const auto& f : gamma) {
    if (f.is_literal() ? pol.classify(f.literal()) == Polarity::Unpolarised
                       : f.positive_connective())
      return false;
  }
  return true;
}

enum class Rule : uint8_t {
  AndPos,
  OrPos1,
  OrPos2,
  TruePos,
  Init1,
  Release,
  AndNeg,
  OrNeg,
  FalseNeg,
  TrueNeg,
  Store,
  Select,
  Init2,
  Pol,
  Cut,
  MemoHit,
  Open,  // open leaf of an incomplete tree
};

inline constexpr std::string_view rule_names[] = {
    "AndPos", "OrPos1", "OrPos2", "TruePos", "Init1", "Release", "AndNeg", "OrNeg", "FalseNeg",
    "TrueNeg", "Store", "Select", "Init2", "Pol", "Cut", "MemoHit", "Open"};

inline std::string_view to_string(Rule r) { return rule_names[static_cast<size_t>(r)]; }

inline std::optional<Rule> rule_from_string(std::string_view s) {
  for (size_t i = 0; i < std::size(rule_names); ++i)
    if (rule_names[i] == s) return static_cast<Rule>(i);
  return std::nullopt;
}

struct ProofTree;
using ProofPtr = std::shared_ptr<const ProofTree>;

struct ProofTree {
  Rule rule = Rule::Open;
  Sequent conclusion;
  std::vector<ProofPtr> premises;
  std::optional<LiteralSet> certificate;  // Init1/Init2/Pol theory certificate
  ProofPtr reused;                        // MemoHit: the reused proof
  size_t node_count = 1;
  size_t open_leaves = 0;

  bool complete() const { return open_leaves == 0; }
};

inline ProofPtr make_proof(Rule rule, Sequent conclusion, std::vector<ProofPtr> premises = {},
                           std::optional<LiteralSet> certificate = std::nullopt,
                           ProofPtr reused = nullptr) {
  auto p = std::make_shared<ProofTree>();
  p->rule = rule;
  p->conclusion = std::move(conclusion);
  p->premises = std::move(premises);
  p->certificate = std::move(certificate);
  p->reused = std::move(reused);
  p->open_leaves = rule == Rule::Open ? 1 : 0;
  for (const auto& q : p->premises) {
    p->node_count += q->node_count;
    p->open_leaves += q->open_leaves;
  }
  return p;
}

inline ProofPtr open_leaf(Sequent s) { return make_proof(Rule::Open, std::move(s)); }

template <typename F>
void for_each_open_leaf(const ProofPtr& p, F&& f) {
  if (p->open_leaves == 0) return;
  if (p->rule == Rule::Open) {
    f(p);
    return;
  }
  for (const auto& q : p->premises) for_each_open_leaf(q, f);
}

inline std::vector<ProofPtr> open_leaves(const ProofPtr& p) {
  std::vector<ProofPtr> out;
  for_each_open_leaf(p, [&](const ProofPtr& q) { out.push_back(q); });
  return out;
}

}  // namespace lkt

#endif  // LKT_PROOF_HPP
