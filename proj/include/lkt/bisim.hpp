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

// Step-for-step correspondence between elementary DPLL(T) runs and
// incomplete proof trees.  An incomplete tree is a ProofTree whose open
// leaves carry Rule::Open.

#ifndef LKT_BISIM_HPP
#define LKT_BISIM_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lkt/dpll_oracle.hpp"
#include "lkt/proof.hpp"
#include "lkt/theories.hpp"

namespace lkt {

struct ExtensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Sum of the clause sizes of phi.
inline size_t norm(const std::vector<Clause>& phi) { return clause_set_size(phi); }

inline size_t step_size_bound(const std::vector<Clause>& phi) { return 2 * norm(phi) + 3; }

inline ProofPtr initial_tree(const std::vector<Clause>& phi) {
  std::vector<Formula> g;
  for (const auto& c : phi) g.push_back(represent_clause(c));
  return open_leaf(Sequent::unfocused(FormulaSet(std::move(g))));
}

namespace detail {

inline LiteralSet literal_part(const FormulaSet& gamma) {
  std::vector<Literal> v;
  for (const auto& f : gamma)
    if (f.is_literal()) v.push_back(f.literal());
  return LiteralSet(std::move(v));
}

inline FormulaSet formula_part(const FormulaSet& gamma) {
  std::vector<Formula> v;
  for (const auto& f : gamma)
    if (!f.is_literal()) v.push_back(f);
  return FormulaSet(std::move(v));
}

inline std::vector<Atom> atoms(const std::vector<Clause>& phi) {
  std::vector<Atom> v;
  for (const auto& l : atoms_of(phi)) v.push_back(l.atom);
  return v;
}

}  // namespace detail

struct CorrespondenceOptions {
  // Also require each open leaf's polarisation set to be exactly the literal
  // set of its DPLL sequence.
  bool strict_polarisation = false;
};

inline bool corresponds(const ProofPtr& tree, const DpllState& state, const DecisionProcedure& dp,
                        CorrespondenceOptions opts = {}) {
  if (state.unsat) return tree->open_leaves == 0;
  auto leaves = open_leaves(tree);
  std::vector<LiteralSet> deltas{literals_of(state.delta)};
  for (auto& b : backtrack_points(state.delta)) deltas.push_back(std::move(b));
  if (leaves.size() != deltas.size()) return false;
  FormulaSet repr;
  for (const auto& c : state.phi) repr.insert(represent_clause(c));
  std::vector<Atom> atoms = detail::atoms(state.phi);
  for (size_t i = 0; i < leaves.size(); ++i) {
    const Sequent& s = leaves[i]->conclusion;
    if (!s.developed()) return false;
    if (!(detail::formula_part(s.gamma()) == repr)) return false;
    if (opts.strict_polarisation && !(s.pol().literals() == deltas[i])) return false;
    LiteralSet lits = detail::literal_part(s.gamma());
    if (!(n_sat(dp, deltas[i], atoms) == n_sat(dp, lits, atoms))) return false;
  }
  return true;
}

namespace detail {

// The proof fragment a transition grows on a developed leaf.
inline ProofPtr extension_for(const Sequent& leaf, const Transition& t, const DecisionProcedure& dp) {
  const auto& g = leaf.gamma();
  const auto& p = leaf.pol();
  auto fail = [](const std::string& why) -> ProofPtr { throw TransitionError(why); };
  switch (t.kind) {
    case TransitionKind::Decide: {
      Literal l = *t.lit;
      auto branch = [&](const Literal& added) {
        Formula stored = Formula::lit(added.negate());
        Sequent s = Sequent::unfocused(g, {stored}, p);
        return make_proof(Rule::Store, s, {open_leaf(Sequent::unfocused(g.with(Formula::lit(added)), {},
                                                                       p.polar(added)))});
      };
      return make_proof(Rule::Cut, leaf, {branch(l), branch(l.negate())});
    }
    case TransitionKind::Propagate:
    case TransitionKind::Fail:
    case TransitionKind::Backtrack: {
      const Clause& c = *t.clause;
      Formula cf = represent_clause(c);
      if (!g.contains(cf)) return fail("clause " + to_string(c) + " is not in the leaf");
      LiteralSet atoms = atm(g, p);
      // Focus chain  not-l1 and+ (not-l2 and+ ... true+).
      std::function<ProofPtr(const Formula&)> sync = [&](const Formula& f) -> ProofPtr {
        Sequent s = Sequent::focused(g, f, p);
        switch (f.connective()) {
          case Connective::AndPos: return make_proof(Rule::AndPos, s, {sync(f.left()), sync(f.right())});
          case Connective::TruePos: return make_proof(Rule::TruePos, s);
          case Connective::Lit: {
            Literal nl = f.literal();
            if (t.lit && nl == t.lit->negate()) {
              Sequent u = Sequent::unfocused(g, {f}, p);
              Sequent d = Sequent::unfocused(g.with(Formula::lit(*t.lit)), {}, p.polar(*t.lit));
              return make_proof(Rule::Release, s, {make_proof(Rule::Store, u, {open_leaf(d)})});
            }
            if (!p.contains(nl)) return fail(nl.to_string() + " is not polarised positively");
            auto cert = dp.consistency(atoms.with(nl.negate()));
            if (!cert) return fail("theory does not refute " + nl.negate().to_string());
            return make_proof(Rule::Init1, s, {}, cert);
          }
          default: return fail("clause representation expected");
        }
      };
      return make_proof(Rule::Select, leaf, {sync(negate_formula(cf))});
    }
    case TransitionKind::PropagateT: {
      auto cert = dp.consistency(atm(g, p).with(t.lit->negate()));
      if (!cert) return fail("theory does not entail " + t.lit->to_string());
      return make_proof(Rule::Pol, leaf, {open_leaf(Sequent::unfocused(g, {}, p.polar(*t.lit)))}, cert);
    }
    case TransitionKind::FailT:
    case TransitionKind::BacktrackT: {
      auto cert = dp.consistency(atm(g, p));
      if (!cert) return fail("leaf is theory-consistent");
      return make_proof(Rule::Init2, leaf, {}, cert);
    }
  }
  return fail("unknown transition");
}

// Replaces the leftmost open leaf.
inline ProofPtr replace_leftmost(const ProofPtr& t, const ProofPtr& repl) {
  if (t->rule == Rule::Open) return repl;
  std::vector<ProofPtr> prems = t->premises;
  for (auto& q : prems)
    if (q->open_leaves > 0) {
      q = replace_leftmost(q, repl);
      break;
    }
  return make_proof(t->rule, t->conclusion, std::move(prems), t->certificate, t->reused);
}

// Equality with theory certificates erased.
inline bool same_shape(const ProofPtr& a, const ProofPtr& b) {
  if (a == b) return true;
  if (a->rule != b->rule || !(a->conclusion == b->conclusion) || a->premises.size() != b->premises.size())
    return false;
  for (size_t i = 0; i < a->premises.size(); ++i)
    if (!same_shape(a->premises[i], b->premises[i])) return false;
  return true;
}

struct Replacement {
  size_t leaf_index;
  ProofPtr old_leaf;
  ProofPtr subtree;
};

inline void diff(const ProofPtr& a, const ProofPtr& b, size_t& open_seen, std::vector<Replacement>& out) {
  if (a == b) {
    open_seen += a->open_leaves;
    return;
  }
  if (a->rule == Rule::Open) {
    if (!(b->rule == Rule::Open && b->conclusion == a->conclusion)) out.push_back({open_seen, a, b});
    ++open_seen;
    return;
  }
  if (a->rule != b->rule || !(a->conclusion == b->conclusion) || a->premises.size() != b->premises.size())
    throw ExtensionError("clause 1: a closed part of the tree was changed");
  for (size_t i = 0; i < a->premises.size(); ++i) diff(a->premises[i], b->premises[i], open_seen, out);
}

}  // namespace detail

inline ProofPtr simulate_step(const ProofPtr& tree, const DpllState& state, const Transition& t,
                              const DecisionProcedure& dp) {
  if (state.unsat || tree->open_leaves == 0) throw TransitionError("no open leaf to extend");
  apply(state, t, dp);  // validates the transition
  const Sequent& leaf = open_leaves(tree).front()->conclusion;
  return detail::replace_leftmost(tree, detail::extension_for(leaf, t, dp));
}

// The unique transition whose simulation turns `before` into `after`.
inline Transition classify_extension(const ProofPtr& before, const ProofPtr& after, const DecisionProcedure& dp) {
  size_t seen = 0;
  std::vector<detail::Replacement> reps;
  detail::diff(before, after, seen, reps);
  if (reps.empty()) throw ExtensionError("clause 1: no open leaf was replaced");
  if (reps.size() > 1) throw ExtensionError("clause 1: more than one open leaf was replaced");
  const auto& r = reps.front();
  if (r.leaf_index != 0) throw ExtensionError("clause 1: the replaced leaf is not the leftmost open leaf");
  const Sequent& leaf = r.old_leaf->conclusion;
  const ProofPtr& sub = r.subtree;
  bool decisions = before->open_leaves > 1;
  std::optional<Transition> t;
  switch (sub->rule) {
    case Rule::Cut: {
      const Sequent& left = sub->premises.at(0)->conclusion;
      if (left.delta().size() != 1 || !left.delta()[0].is_literal())
        throw ExtensionError("clause 2: cut is not on a literal");
      t = Transition::decide(left.delta()[0].literal().negate());
      break;
    }
    case Rule::Select: {
      Formula focus = sub->premises.at(0)->conclusion.focus();
      auto c = clause_of(negate_formula(focus));
      if (!c) throw ExtensionError("clause 2: selected formula does not represent a clause");
      std::optional<Literal> released;
      for_each_open_leaf(sub, [&](const ProofPtr& p) {
        for (const auto& f : p->conclusion.gamma())
          if (f.is_literal() && !leaf.gamma().contains(f)) released = f.literal();
      });
      if (released) t = Transition::propagate(*c, *released);
      else t = decisions ? Transition::backtrack(*c) : Transition::fail(*c);
      break;
    }
    case Rule::Pol: {
      const auto& pp = sub->premises.at(0)->conclusion.pol();
      for (const auto& l : pp.literals())
        if (!leaf.pol().contains(l)) t = Transition::propagate_t(l);
      if (!t) throw ExtensionError("clause 2: Pol adds no literal");
      break;
    }
    case Rule::Init2: t = decisions ? Transition::backtrack_t() : Transition::fail_t(); break;
    default: throw ExtensionError(std::string("clause 2: no extension shape starts with ") + std::string(to_string(sub->rule)));
  }
  ProofPtr expected;
  try {
    expected = detail::extension_for(leaf, *t, dp);
  } catch (const TransitionError& e) {
    throw ExtensionError(std::string("clause 2: side condition fails: ") + e.what());
  }
  if (!detail::same_shape(expected, sub))
    throw ExtensionError("clause 2: extension is not the minimal one for " + t->to_string());
  return *t;
}

// Pairs each transition of a run with the size growth of its extension.
struct SimulationTrace {
  std::vector<Transition> transitions;
  std::vector<size_t> size_deltas;
  std::vector<ProofPtr> trees;  // trees[0] is the initial tree
  size_t bound = 0;

  nlohmann::json to_json() const {
    nlohmann::json steps = nlohmann::json::array();
    for (size_t i = 0; i < transitions.size(); ++i)
      steps.push_back({{"transition", transitions[i].to_string()},
                       {"size_delta", size_deltas[i]},
                       {"bound", bound}});
    return steps;
  }
};

inline SimulationTrace simulate_run(const std::vector<Clause>& phi, const std::vector<Transition>& run,
                                    const DecisionProcedure& dp) {
  SimulationTrace tr;
  tr.bound = step_size_bound(phi);
  DpllState s = DpllState::initial(phi);
  ProofPtr tree = initial_tree(phi);
  tr.trees.push_back(tree);
  for (const auto& t : run) {
    ProofPtr next = simulate_step(tree, s, t, dp);
    s = apply(s, t, dp);
    tr.transitions.push_back(t);
    tr.size_deltas.push_back(next->node_count - tree->node_count);
    tr.trees.push_back(next);
    tree = next;
  }
  return tr;
}

}  // namespace lkt

#endif  // LKT_BISIM_HPP
