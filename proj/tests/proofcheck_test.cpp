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

#include <gtest/gtest.h>

#include "lkt/kernel.hpp"
#include "lkt/plugins.hpp"
#include "lkt/proofcheck.hpp"
#include "support.hpp"

namespace lkt {
namespace {

using testing::var;

const SyntacticTheory empty_theory;
const LraTheory lra_theory;

ProofPtr with_rule(const ProofPtr& p, Rule r) {
  return make_proof(r, p->conclusion, p->premises, p->certificate, p->reused);
}

ProofPtr with_certificate(const ProofPtr& p, std::optional<LiteralSet> cert) {
  return make_proof(p->rule, p->conclusion, p->premises, std::move(cert), p->reused);
}

ProofPtr with_premises(const ProofPtr& p, std::vector<ProofPtr> prems) {
  return make_proof(p->rule, p->conclusion, std::move(prems), p->certificate, p->reused);
}

TEST(Check, TrueNegAxiom) {
  ProofPtr p = make_proof(Rule::TrueNeg, Sequent::unfocused({}, {Formula::true_neg()}));
  EXPECT_TRUE(check(p, empty_theory).ok);
}

TEST(Check, MislabelledConclusion) {
  ProofPtr p = make_proof(Rule::TrueNeg, Sequent::unfocused({}, {Formula::false_neg()}));
  CheckResult r = check(p, empty_theory);
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.diagnostic.empty());
}

TEST(Check, OpenLeavesAreRejected) {
  EXPECT_FALSE(check(open_leaf(Sequent::unfocused({}, {Formula::true_neg()})), empty_theory).ok);
}

TEST(Check, Init2CertificateIsRevalidated) {
  testing::LraExample ex;
  PolarisationSet p{LiteralSet{ex.x_gt_0, ex.x_eq_m1}};
  Sequent s = Sequent::unfocused(FormulaSet{Formula::lit(ex.x_gt_0), Formula::lit(ex.x_eq_m1)}, {}, p);
  EXPECT_TRUE(check(make_proof(Rule::Init2, s, {}, LiteralSet{ex.x_gt_0, ex.x_eq_m1}), lra_theory).ok);
  // Consistent certificate.
  EXPECT_FALSE(check(make_proof(Rule::Init2, s, {}, LiteralSet{ex.x_gt_0}), lra_theory).ok);
  // Certificate mentioning a literal gamma does not hold.
  EXPECT_FALSE(check(make_proof(Rule::Init2, s, {}, LiteralSet{ex.x_gt_0, ex.x_gt_0.negate()}), lra_theory).ok);
  // The same leaf is not closed by the empty theory.
  EXPECT_FALSE(check(make_proof(Rule::Init2, s, {}, LiteralSet{ex.x_gt_0, ex.x_eq_m1}), empty_theory).ok);
  EXPECT_FALSE(check(make_proof(Rule::Init2, s), lra_theory).ok);
}

TEST(Check, StoreMustPolarise) {
  Formula l = Formula::lit(var(1));
  Sequent concl = Sequent::unfocused({}, {l, Formula::true_neg()});
  Sequent good = Sequent::unfocused(FormulaSet{Formula::lit(var(1, false))}, {Formula::true_neg()},
                                    PolarisationSet{LiteralSet{var(1, false)}});
  Sequent bad = Sequent::unfocused(FormulaSet{Formula::lit(var(1, false))}, {Formula::true_neg()},
                                   PolarisationSet{LiteralSet{var(1)}});
  auto axiom = [](Sequent s) { return make_proof(Rule::TrueNeg, std::move(s)); };
  EXPECT_TRUE(check(make_proof(Rule::Store, concl, {axiom(good)}), empty_theory).ok);
  EXPECT_FALSE(check(make_proof(Rule::Store, concl, {axiom(bad)}), empty_theory).ok);
}

TEST(Check, SelectNeedsTheNegationInGamma) {
  Sequent concl = Sequent::unfocused(FormulaSet{Formula::true_neg()});
  // Negation of true- is false+, which has no rule: build a premise that is
  // at least well typed and see the checker reject the selection.
  Sequent prem = Sequent::focused(concl.gamma(), Formula::true_pos(), {});
  ProofPtr p = make_proof(Rule::Select, concl, {make_proof(Rule::TruePos, prem)});
  EXPECT_FALSE(check(p, empty_theory).ok);
  Sequent ok = Sequent::unfocused(FormulaSet{Formula::false_neg()});
  ProofPtr q = make_proof(Rule::Select, ok, {make_proof(Rule::TruePos, Sequent::focused(ok.gamma(), Formula::true_pos(), {}))});
  EXPECT_TRUE(check(q, empty_theory).ok);
}

TEST(Check, PolNeedsEntailment) {
  testing::LraExample ex;
  Literal ny = ex.y_gt_0.negate();
  PolarisationSet p{LiteralSet{ex.x_gt_0, ex.xy_gt_0.negate()}};
  FormulaSet gamma{Formula::lit(ex.x_gt_0), Formula::lit(ex.xy_gt_0.negate()), represent_clause(ex.c3)};
  Sequent concl = Sequent::unfocused(gamma, {}, p);
  auto premise = [&](const Literal& l) {
    Sequent s = Sequent::unfocused(gamma, {}, p.polar(l));
    return make_proof(Rule::Init2, s, {}, LiteralSet{ex.x_gt_0, ex.xy_gt_0.negate(), l});
  };
  // A sound Pol step over a bogus Init2 leaf: {x>0, not(x+y>0), not(y>0)} is
  // satisfiable, so the leaf is what gets rejected.
  ProofPtr pol = make_proof(Rule::Pol, concl, {premise(ny)}, LiteralSet{ex.x_gt_0, ex.xy_gt_0.negate(), ex.y_gt_0});
  CheckResult r = check(pol, lra_theory);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.diagnostic.find("Init2"), std::string::npos) << r.diagnostic;
  // Polarising y>0 positively is not entailed.
  ProofPtr wrong = make_proof(Rule::Pol, concl, {premise(ex.y_gt_0)}, LiteralSet{ex.x_gt_0, ex.xy_gt_0.negate()});
  EXPECT_FALSE(check(wrong, lra_theory).ok);
}

// Corrupting any node of a kernel proof must be caught.
TEST(Check, SingleNodeCorruptionsOfKernelProofs) {
  Kernel k(make_theory("lra"));
  testing::LraExample ex;
  Output o = testing::play(k.machine(testing::clause_statement(ex.phi)), ex.run1());
  ASSERT_TRUE(o.is_jackpot());
  ProofPtr proof = o.answer().proof();
  ASSERT_TRUE(check(proof, k.theory()).ok);

  // Rebuild the tree with the n-th node (preorder) replaced by f(node).
  std::function<ProofPtr(const ProofPtr&, size_t&, size_t, const std::function<ProofPtr(const ProofPtr&)>&)> edit =
      [&](const ProofPtr& p, size_t& i, size_t target, const auto& f) -> ProofPtr {
    if (i++ == target) return f(p);
    std::vector<ProofPtr> prems;
    for (const auto& q : p->premises) prems.push_back(edit(q, i, target, f));
    return with_premises(p, std::move(prems));
  };
  size_t rejected = 0, tried = 0;
  for (size_t n = 0; n < proof->node_count; ++n) {
    std::vector<std::function<ProofPtr(const ProofPtr&)>> mutations = {
        [](const ProofPtr& p) { return p->premises.empty() ? nullptr : with_premises(p, {}); },
        [](const ProofPtr& p) { return p->certificate ? with_certificate(p, LiteralSet{}) : nullptr; },
        [](const ProofPtr& p) { return with_rule(p, p->rule == Rule::TrueNeg ? Rule::FalseNeg : Rule::TrueNeg); },
        [](const ProofPtr& p) { return open_leaf(p->conclusion); },
    };
    for (const auto& m : mutations) {
      size_t i = 0;
      bool applies = true;
      ProofPtr bad = edit(proof, i, n, [&](const ProofPtr& p) {
        ProofPtr q = m(p);
        applies = q != nullptr;
        return q ? q : p;
      });
      if (!applies) continue;
      ++tried;
      if (!check(bad, k.theory()).ok) ++rejected;
    }
  }
  EXPECT_GT(tried, proof->node_count);
  EXPECT_EQ(rejected, tried);
}

TEST(Check, KernelProofsAndTheirPrunedFormsCheck) {
  Kernel k(make_theory("empty"));
  testing::Rng rng(31);
  int n = 0;
  while (n < 100) {
    auto cnf = testing::random_cnf(rng, 5, 22, 3);
    if (testing::satisfiable(cnf, 5)) continue;
    ++n;
    DpllWlPlugin plugin(k.theory_ptr());
    Answer a = plugin.solve(k.machine(testing::clause_statement(testing::to_clauses(cnf))));
    ASSERT_TRUE(a.provable());
    ASSERT_TRUE(check(a.proof(), k.theory()).ok);
    ASSERT_TRUE(check(prune(a.proof()), k.theory()).ok);
  }
}

TEST(Check, MemoHitMustApply) {
  Sequent small = Sequent::unfocused(FormulaSet{Formula::true_neg()});
  ProofPtr reused = make_proof(Rule::MemoHit, small, {}, std::nullopt,
                               make_proof(Rule::Select, Sequent::unfocused(FormulaSet{Formula::false_neg()}),
                                          {make_proof(Rule::TruePos, Sequent::focused(FormulaSet{Formula::false_neg()},
                                                                                      Formula::true_pos(), {}))}));
  // The reused proof's gamma {false-} is not inside {true-}.
  EXPECT_FALSE(check(reused, empty_theory).ok);
  Sequent big = Sequent::unfocused(FormulaSet{Formula::true_neg(), Formula::false_neg()});
  EXPECT_TRUE(check(make_proof(Rule::MemoHit, big, {}, std::nullopt, reused->reused), empty_theory).ok);
  EXPECT_FALSE(check(make_proof(Rule::MemoHit, big), empty_theory).ok);
}

}  // namespace
}  // namespace lkt
