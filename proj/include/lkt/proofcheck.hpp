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

// Independent checker for complete proof trees.  Theory certificates are
// re-validated rather than trusted.

#ifndef LKT_PROOFCHECK_HPP
#define LKT_PROOFCHECK_HPP

#include <string>
#include <unordered_set>

#include "lkt/proof.hpp"
#include "lkt/theories.hpp"

namespace lkt {

struct CheckResult {
  bool ok = true;
  std::string diagnostic;  // first failure, empty when ok
  explicit operator bool() const { return ok; }
};

namespace detail {

class ProofChecker {
 public:
  explicit ProofChecker(const DecisionProcedure& dp) : dp_(dp) {}

  CheckResult run(const ProofPtr& p) {
    if (!p) return fail("null proof");
    if (!visit(*p)) return result_;
    return {};
  }

 private:
  bool fail_at(const ProofTree& n, const std::string& why) {
    result_.ok = false;
    result_.diagnostic = std::string(to_string(n.rule)) + " at " + n.conclusion.to_string() + ": " + why;
    return false;
  }
  CheckResult fail(const std::string& why) { return CheckResult{false, why}; }

  bool premises(const ProofTree& n, size_t k) {
    if (n.premises.size() != k)
      return fail_at(n, "expected " + std::to_string(k) + " premises, got " +
                            std::to_string(n.premises.size()));
    return true;
  }

  // Premise i must be an unfocused sequent with the given components.
  bool expect_unfocused(const ProofTree& n, size_t i, const FormulaSet& gamma,
                        const std::vector<Formula>& delta, const PolarisationSet& pol) {
    const Sequent& s = n.premises[i]->conclusion;
    if (s.is_focused() || !(s.gamma() == gamma) || s.delta() != delta || !(s.pol() == pol))
      return fail_at(n, "premise " + std::to_string(i + 1) + " is " + s.to_string());
    return true;
  }
  bool expect_focused(const ProofTree& n, size_t i, const FormulaSet& gamma, const Formula& focus,
                      const PolarisationSet& pol) {
    const Sequent& s = n.premises[i]->conclusion;
    if (!s.is_focused() || !(s.gamma() == gamma) || !(s.focus() == focus) || !(s.pol() == pol))
      return fail_at(n, "premise " + std::to_string(i + 1) + " is " + s.to_string());
    return true;
  }

  bool certificate_entails(const ProofTree& n, const LiteralSet& allowed) {
    if (!n.certificate) return fail_at(n, "missing theory certificate");
    if (!n.certificate->subset_of(allowed))
      return fail_at(n, "certificate " + to_string(*n.certificate) + " not drawn from " +
                            to_string(allowed));
    if (!inconsistent(dp_, *n.certificate))
      return fail_at(n, "theory reports " + to_string(*n.certificate) + " consistent");
    return true;
  }

  bool visit(const ProofTree& n) {
    const Sequent& s = n.conclusion;
    const auto& g = s.gamma();
    const auto& p = s.pol();
    if (!gamma_well_formed(g, p))
      return fail_at(n, "gamma holds a positive formula or an unpolarised literal");
    if (n.rule == Rule::Open) return fail_at(n, "open leaf in a complete proof");
    if (n.rule != Rule::MemoHit && n.reused) return fail_at(n, "unexpected reused proof");

    if (s.is_focused()) {
      const Formula& f = s.focus();
      switch (n.rule) {
        case Rule::AndPos:
          if (f.connective() != Connective::AndPos) return fail_at(n, "focus is not a positive conjunction");
          if (!premises(n, 2) || !expect_focused(n, 0, g, f.left(), p) ||
              !expect_focused(n, 1, g, f.right(), p))
            return false;
          break;
        case Rule::OrPos1:
        case Rule::OrPos2:
          if (f.connective() != Connective::OrPos) return fail_at(n, "focus is not a positive disjunction");
          if (!premises(n, 1) ||
              !expect_focused(n, 0, g, n.rule == Rule::OrPos1 ? f.left() : f.right(), p))
            return false;
          break;
        case Rule::TruePos:
          if (f.connective() != Connective::TruePos) return fail_at(n, "focus is not true+");
          if (!premises(n, 0)) return false;
          break;
        case Rule::Init1: {
          if (!f.is_literal() || !p.contains(f.literal()))
            return fail_at(n, "focus is not a positive literal of the polarisation set");
          if (!premises(n, 0)) return false;
          if (!certificate_entails(n, atm(g, p).with(f.literal().negate()))) return false;
          break;
        }
        case Rule::Release:
          if (classify(f, p) == Polarity::PPositive) return fail_at(n, "released formula is positive");
          if (!premises(n, 1) || !expect_unfocused(n, 0, g, {f}, p)) return false;
          break;
        default: return fail_at(n, "rule does not apply to a focused sequent");
      }
    } else if (!s.developed()) {
      const auto& d = s.delta();
      const Formula& a = d.front();
      std::vector<Formula> rest(d.begin() + 1, d.end());
      auto with_front = [&](std::initializer_list<Formula> front) {
        std::vector<Formula> v(front);
        v.insert(v.end(), rest.begin(), rest.end());
        return v;
      };
      switch (n.rule) {
        case Rule::AndNeg:
          if (a.connective() != Connective::AndNeg) return fail_at(n, "principal formula is not a negative conjunction");
          if (!premises(n, 2) || !expect_unfocused(n, 0, g, with_front({a.left()}), p) ||
              !expect_unfocused(n, 1, g, with_front({a.right()}), p))
            return false;
          break;
        case Rule::OrNeg:
          if (a.connective() != Connective::OrNeg) return fail_at(n, "principal formula is not a negative disjunction");
          if (!premises(n, 1) || !expect_unfocused(n, 0, g, with_front({a.left(), a.right()}), p))
            return false;
          break;
        case Rule::FalseNeg:
          if (a.connective() != Connective::FalseNeg) return fail_at(n, "principal formula is not false-");
          if (!premises(n, 1) || !expect_unfocused(n, 0, g, rest, p)) return false;
          break;
        case Rule::TrueNeg:
          if (a.connective() != Connective::TrueNeg) return fail_at(n, "principal formula is not true-");
          if (!premises(n, 0)) return false;
          break;
        case Rule::Store: {
          if (!a.is_literal() && !a.positive_connective())
            return fail_at(n, "stored formula is neither a literal nor positive");
          Formula na = negate_formula(a);
          if (!premises(n, 1) || !expect_unfocused(n, 0, g.with(na), rest, polar(p, na))) return false;
          break;
        }
        default: return fail_at(n, "rule does not apply to an unfocused sequent");
      }
    } else {
      switch (n.rule) {
        case Rule::Select: {
          if (!premises(n, 1)) return false;
          const Sequent& prem = n.premises[0]->conclusion;
          if (!prem.is_focused()) return fail_at(n, "premise is not focused");
          Formula selected = negate_formula(prem.focus());
          if (!g.contains(selected)) return fail_at(n, "negation of the focus is not in gamma");
          if (classify(prem.focus(), p) == Polarity::PNegative) return fail_at(n, "focus is negative");
          if (!expect_focused(n, 0, g, prem.focus(), p)) return false;
          break;
        }
        case Rule::Init2:
          if (!premises(n, 0) || !certificate_entails(n, atm(g, p))) return false;
          break;
        case Rule::Pol: {
          if (!premises(n, 1)) return false;
          const Sequent& prem = n.premises[0]->conclusion;
          if (prem.is_focused() || !prem.developed() || !(prem.gamma() == g))
            return fail_at(n, "premise must be the same developed gamma");
          if (prem.pol().size() != p.size() + 1 || !p.subset_of(prem.pol()))
            return fail_at(n, "premise must polarise exactly one more literal");
          Literal l;
          for (const auto& x : prem.pol().literals())
            if (!p.contains(x)) l = x;
          if (p.classify(l) != Polarity::Unpolarised) return fail_at(n, "literal already polarised");
          if (!occurs_in(l, g)) return fail_at(n, "literal does not occur in gamma");
          if (!certificate_entails(n, atm(g, p).with(l.negate()))) return false;
          break;
        }
        case Rule::Cut: {
          if (!premises(n, 2)) return false;
          const Sequent& left = n.premises[0]->conclusion;
          if (left.is_focused() || left.delta().size() != 1 || !left.delta()[0].is_literal())
            return fail_at(n, "left premise must have a single literal to the right");
          Formula k = left.delta()[0];
          if (!occurs_in(k.literal(), g)) return fail_at(n, "cut literal does not occur in gamma");
          if (!expect_unfocused(n, 0, g, {k}, p) ||
              !expect_unfocused(n, 1, g, {negate_formula(k)}, p))
            return false;
          break;
        }
        case Rule::MemoHit: {
          if (!premises(n, 0)) return false;
          if (!n.reused) return fail_at(n, "missing reused proof");
          const Sequent& r = n.reused->conclusion;
          if (!r.developed() || !r.gamma().subset_of(g))
            return fail_at(n, "reused statement " + r.to_string() + " does not apply");
          // The reused proof is valid under its own polarisation set, which is
          // admissible here by polarity independence and weakening.
          if (checked_.insert(n.reused.get()).second && !visit(*n.reused)) return false;
          break;
        }
        default: return fail_at(n, "rule does not apply to a developed sequent");
      }
    }
    for (const auto& q : n.premises)
      if (!visit(*q)) return false;
    return true;
  }

  const DecisionProcedure& dp_;
  CheckResult result_;
  std::unordered_set<const ProofTree*> checked_;
};

}  // namespace detail

inline CheckResult check(const ProofPtr& proof, const DecisionProcedure& dp) {
  return detail::ProofChecker(dp).run(proof);
}

}  // namespace lkt

#endif  // LKT_PROOFCHECK_HPP
