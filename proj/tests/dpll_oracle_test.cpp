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

#include <sstream>

#include <gtest/gtest.h>

#include "lkt/dpll_oracle.hpp"
#include "support.hpp"

namespace lkt {
namespace {

using testing::Rng;
using testing::var;

const SyntacticTheory empty_theory;
const LraTheory lra_theory;

const Literal l = prop_lit("l");
const std::vector<Clause> l_and_not_l{Clause{l}, Clause{l.negate()}};

std::vector<Transition> example_run1(const testing::LraExample& ex) {
  return {Transition::propagate(ex.c1, ex.x_gt_0), Transition::propagate(ex.c2, ex.xy_gt_0.negate()),
          Transition::propagate_t(ex.y_gt_0.negate()), Transition::propagate_t(ex.x_eq_m1.negate()),
          Transition::fail(ex.c3)};
}

std::vector<Transition> example_run2(const testing::LraExample& ex) {
  return {Transition::propagate(ex.c1, ex.x_gt_0), Transition::propagate(ex.c2, ex.xy_gt_0.negate()),
          Transition::propagate_t(ex.y_gt_0.negate()), Transition::propagate(ex.c3, ex.x_eq_m1),
          Transition::fail_t()};
}

TEST(Apply, PropagateThenFail) {
  DpllState s = DpllState::initial(l_and_not_l);
  DpllState s1 = apply(s, Transition::propagate(Clause{l}, l), empty_theory);
  EXPECT_EQ(s1.delta, (Trail{{l, false}}));
  EXPECT_EQ(s1.phi, l_and_not_l);
  DpllState s2 = apply(s1, Transition::fail(Clause{l.negate()}), empty_theory);
  EXPECT_TRUE(s2.unsat);
}

TEST(Apply, SideConditionsAreEnforced) {
  DpllState s = DpllState::initial(l_and_not_l);
  // Clause not falsified.
  EXPECT_THROW(apply(s, Transition::fail(Clause{l}), empty_theory), TransitionError);
  // No decision to backtrack.
  DpllState s1 = apply(s, Transition::propagate(Clause{l}, l), empty_theory);
  EXPECT_THROW(apply(s1, Transition::backtrack(Clause{l.negate()}), empty_theory), TransitionError);
  // Not fresh.
  EXPECT_THROW(apply(s1, Transition::decide(l.negate()), empty_theory), TransitionError);
  // Not an atom of phi.
  EXPECT_THROW(apply(s, Transition::decide(prop_lit("m")), empty_theory), TransitionError);
  // Not a clause of phi.
  EXPECT_THROW(apply(s, Transition::propagate(Clause{l, prop_lit("m")}, l), empty_theory), TransitionError);
  // Not entailed.
  EXPECT_THROW(apply(s, Transition::propagate_t(l), empty_theory), TransitionError);
  EXPECT_THROW(apply(s, Transition::fail_t(), empty_theory), TransitionError);
  // Unsat states are final.
  EXPECT_THROW(apply(DpllState::failed(l_and_not_l), Transition::decide(l), empty_theory), TransitionError);
}

TEST(Apply, DecideAndBacktrack) {
  auto phi = testing::to_clauses({{1, 2}, {1, -2}});
  DpllState s = apply(DpllState::initial(phi), Transition::decide(var(1, false)), empty_theory);
  EXPECT_EQ(s.delta, (Trail{{var(1, false), true}}));
  s = apply(s, Transition::propagate(testing::clause({1, 2}), var(2)), empty_theory);
  s = apply(s, Transition::backtrack(testing::clause({1, -2})), empty_theory);
  EXPECT_EQ(s.delta, (Trail{{var(1), false}}));
}

TEST(Apply, ExampleRunsEndInUnsat) {
  testing::LraExample ex;
  for (const auto& script : {example_run1(ex), example_run2(ex)}) {
    DpllState s = DpllState::initial(ex.phi);
    for (const auto& t : script) {
      ASSERT_FALSE(s.unsat);
      s = apply(s, t, lra_theory);
    }
    EXPECT_TRUE(s.unsat);
  }
}

TEST(Apply, ExampleRunNeedsTheTheory) {
  testing::LraExample ex;
  DpllState s = DpllState::initial(ex.phi);
  auto script = example_run1(ex);
  s = apply(s, script[0], empty_theory);
  s = apply(s, script[1], empty_theory);
  EXPECT_THROW(apply(s, script[2], empty_theory), TransitionError);
}

TEST(LegalTransitions, UnitClause) {
  auto ts = legal_transitions(DpllState::initial({Clause{l}}), empty_theory);
  auto has = [&](const Transition& t) { return std::find(ts.begin(), ts.end(), t) != ts.end(); };
  EXPECT_TRUE(has(Transition::propagate(Clause{l}, l)));
  EXPECT_TRUE(has(Transition::decide(l)));
  EXPECT_TRUE(has(Transition::decide(l.negate())));
}

TEST(LegalTransitions, UnsatIsRejected) {
  EXPECT_THROW(legal_transitions(DpllState::failed({Clause{l}}), empty_theory), TransitionError);
}

TEST(LegalTransitions, SaturatedModelHasNone) {
  auto phi = testing::to_clauses({{1, 2}, {-1}});
  DpllState s{false, {{var(1, false), false}, {var(2), false}}, phi};
  EXPECT_TRUE(legal_transitions(s, empty_theory).empty());
}

TEST(LegalTransitions, AllApplyAndOthersDoNot) {
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    auto phi = testing::to_clauses(testing::random_cnf(rng, 4, 5, 2));
    DpllState s = DpllState::initial(phi);
    for (int step = 0; step < 12 && !s.unsat; ++step) {
      auto ts = legal_transitions(s, empty_theory);
      for (const auto& t : ts) ASSERT_NO_THROW(apply(s, t, empty_theory)) << t.to_string();
      // Every Decide over atm phi that is not listed must be rejected.
      for (const auto& lit : signed_atoms_of(phi)) {
        auto t = Transition::decide(lit);
        if (std::find(ts.begin(), ts.end(), t) == ts.end()) {
          ASSERT_THROW(apply(s, t, empty_theory), TransitionError);
        }
      }
      if (ts.empty()) break;
      s = apply(s, ts[std::uniform_int_distribution<size_t>(0, ts.size() - 1)(rng)], empty_theory);
      // The trail never repeats an atom.
      LiteralSet seen;
      for (const auto& t : s.delta) {
        ASSERT_FALSE(seen.contains(t.lit) || seen.contains(t.lit.negate()));
        seen.insert(t.lit);
      }
    }
  }
}

TEST(BacktrackPoints, Examples) {
  EXPECT_TRUE(backtrack_points({}).empty());
  Literal l1 = prop_lit("l1"), l2 = prop_lit("l2"), l3 = prop_lit("l3"), l4 = prop_lit("l4");
  Trail d{{l1, false}, {l2, true}, {l3, false}, {l4, true}};
  auto pts = backtrack_points(d);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0], (LiteralSet{l1, l2, l3, l4.negate()}));
  EXPECT_EQ(pts[1], (LiteralSet{l1, l2.negate()}));
}

TEST(BacktrackPoints, OnePerDecision) {
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    Trail d;
    int n = std::uniform_int_distribution<int>(0, 10)(rng);
    for (int k = 1; k <= n; ++k) d.push_back({var(k, std::bernoulli_distribution(0.5)(rng)), std::bernoulli_distribution(0.4)(rng)});
    ASSERT_EQ(backtrack_points(d).size(), decision_count(d));
  }
}

TEST(Run, Examples) {
  EXPECT_TRUE(run(l_and_not_l, empty_theory).unsat);
  RunResult r = run({Clause{l}}, empty_theory);
  EXPECT_FALSE(r.unsat);
  EXPECT_EQ(r.delta, (Trail{{l, false}}));
  testing::LraExample ex;
  EXPECT_TRUE(run(ex.phi, lra_theory).unsat);
  EXPECT_FALSE(run(ex.phi, empty_theory).unsat);
}

TEST(Run, AgreesWithTruthTables) {
  Rng rng(43);
  for (int i = 0; i < 300; ++i) {
    int n = std::uniform_int_distribution<int>(2, 12)(rng);
    auto cnf = testing::random_cnf(rng, n, static_cast<int>(4.26 * n), std::min(n, 3));
    RunResult r = run(testing::to_clauses(cnf), empty_theory);
    ASSERT_EQ(r.unsat, !testing::satisfiable(cnf, n));
    if (!r.unsat) {
      // The saturated trail is a model.
      LiteralSet m = literals_of(r.delta);
      for (const auto& c : testing::to_clauses(cnf)) {
        bool sat = false;
        for (const auto& x : c) sat |= m.contains(x);
        ASSERT_TRUE(sat);
      }
    }
  }
}

TEST(Run, StepLimit) {
  auto cnf = testing::to_clauses({{1, 2}, {-1, 2}, {1, -2}, {-1, -2}});
  EXPECT_THROW(run(cnf, empty_theory, default_strategy, 2), std::runtime_error);
}

TEST(Trace, Format) {
  RunResult r = run(l_and_not_l, empty_theory);
  std::ostringstream os;
  dump_trace(os, r);
  EXPECT_EQ(os.str(), "Propagate {l} l : l || 2\nFail {(not l)} : unsat || 2\n");
  Trail d{{prop_lit("a"), true}, {prop_lit("b", false), false}};
  EXPECT_EQ(to_string(d), "a^d, (not b)");
}

}  // namespace
}  // namespace lkt
