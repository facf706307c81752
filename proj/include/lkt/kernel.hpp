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

// The trusted proof-search kernel.
//
// The kernel behaves like a slot machine: every call returns either a final
// Answer or a request for a coin, i.e. one of the choices the focused calculus
// leaves open.  All search state lives in immutable, path-copied trees, so an
// Output can be resumed any number of times.  Answer values can only be built
// here.

#ifndef LKT_KERNEL_HPP
#define LKT_KERNEL_HPP

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "lkt/proof.hpp"
#include "lkt/theories.hpp"

namespace lkt {

struct IllegalCoin : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MalformedStatement : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when an internal invariant breaks; never expected.
struct KernelBug : std::logic_error {
  using std::logic_error::logic_error;
};

namespace detail {
struct Engine;
}

class Answer {
 public:
  bool provable() const { return provable_; }
  const Sequent& statement() const { return statement_; }
  // Pruned proof; null for NotProvable.
  const ProofPtr& proof() const { return proof_; }
  // The gamma the answer speaks about: the proof's pruned gamma, or the
  // statement's gamma for NotProvable.
  const FormulaSet& key() const { return provable_ ? proof_->conclusion.gamma() : statement_.gamma(); }
  const DecisionProcedure* theory() const { return theory_; }

 private:
  friend struct detail::Engine;
  Answer(bool provable, Sequent statement, ProofPtr proof, const DecisionProcedure* theory)
      : provable_(provable), statement_(std::move(statement)), proof_(std::move(proof)), theory_(theory) {}

  bool provable_;
  Sequent statement_;
  ProofPtr proof_;
  const DecisionProcedure* theory_;
};

enum class Direction : uint8_t { Left, Right };
enum class BranchKind : uint8_t { Success, Failure };

namespace coin {
struct Focus {
  size_t index;  // position of the selected formula in the goal's gamma
};
struct Side {
  int which;  // 1 or 2
};
struct Polarise {
  Literal lit;
};
// Cut on `lit`: the branch proving `lit` (which stores its negation) comes first.
struct CutLit {
  Literal lit;
};
struct ConsistencyCheck {};
struct Memo {
  Answer answer;
};
struct MoveNext {
  Direction direction;
  BranchKind kind;
};
}  // namespace coin

using Coin = std::variant<coin::Focus, coin::Side, coin::Polarise, coin::CutLit,
                          coin::ConsistencyCheck, coin::Memo, coin::MoveNext>;

// Stable textual identifier of a coin, unique within one goal's legal set.
inline std::string coin_id(const Coin& c) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, coin::Focus>) return "focus:" + std::to_string(k.index);
        if constexpr (std::is_same_v<K, coin::Side>) return "side:" + std::to_string(k.which);
        if constexpr (std::is_same_v<K, coin::Polarise>) return "pol:" + k.lit.to_string();
        if constexpr (std::is_same_v<K, coin::CutLit>) return "cut:" + k.lit.to_string();
        if constexpr (std::is_same_v<K, coin::ConsistencyCheck>) return "check";
        if constexpr (std::is_same_v<K, coin::Memo>) return "memo";
        if constexpr (std::is_same_v<K, coin::MoveNext>)
          return std::string("move:") + (k.direction == Direction::Left ? "left" : "right") + ":" +
                 (k.kind == BranchKind::Success ? "success" : "failure");
      },
      c);
}

inline std::string_view coin_kind(const Coin& c) {
  static constexpr std::string_view names[] = {"Focus", "Side", "Polarise", "CutLit",
                                               "ConsistencyCheck", "Memo", "MoveNext"};
  return names[c.index()];
}

struct KernelOptions {
  bool allow_cuts = true;
};

// Rule applications in one uninterrupted run of the kernel, and the budget
// they must stay within.
struct Segment {
  size_t steps = 0;
  size_t budget = 0;
};

namespace detail {

enum class NodeState : uint8_t { Developed, OrPause, Pending, Internal, Closed };

struct SNode;
using SNodePtr = std::shared_ptr<const SNode>;

struct SNode {
  NodeState state = NodeState::Developed;
  Sequent seq;
  Rule rule = Rule::Open;  // Internal and Closed nodes
  std::vector<SNodePtr> kids;
  std::optional<LiteralSet> cert;
  ProofPtr proof;  // Closed nodes
  size_t open = 0;
  // Alternatives already refuted at a developed sequent (Developed nodes, and
  // Internal nodes whose choice was made at a developed sequent).
  std::shared_ptr<const std::vector<bool>> focus_tried;
  bool init2_tried = false;
  // Disjuncts already refuted at an OrPause node or an OrPos node.
  uint8_t sides_tried = 0;
  size_t chosen = 0;  // Select: focus index
};

struct Config {
  TheoryPtr theory;
  KernelOptions options;
};

struct State {
  std::shared_ptr<const Config> cfg;
  Sequent statement;
  SNodePtr root;
  std::vector<uint32_t> current;
};

}  // namespace detail

class Output {
 public:
  bool is_jackpot() const { return answer_.has_value(); }
  const Answer& answer() const {
    if (!answer_) throw std::logic_error("output is not a jackpot");
    return *answer_;
  }
  // The goal awaiting a coin.
  const Sequent& goal() const;
  bool goal_developed() const { return !is_jackpot() && goal().developed(); }
  // Concrete coins legal at the goal.  Memo coins are legal at developed goals
  // whenever the offered answer applies; they are not enumerated.
  std::vector<Coin> legal_coins() const;
  bool accepts_memo() const { return goal_developed(); }
  std::vector<size_t> focus_candidates() const;

  Output insert(const Coin& c) const;

  // True when the previous coin lost: its alternative was refuted and the
  // branch is offered again.
  bool coin_failed() const { return !feedback_.empty(); }
  const std::string& feedback() const { return feedback_; }

  // Provable answers for developed sequents closed during the call that
  // produced this output, plus NotProvable for a refuted one.
  std::vector<Answer> closed_answers() const;

  // The current search tree, open leaves included.
  ProofPtr snapshot() const;
  size_t open_branches() const;

  const std::vector<Segment>& segments() const { return segments_; }
  const Sequent& statement() const { return state_->statement; }

 private:
  friend struct detail::Engine;
  std::optional<Answer> answer_;
  std::shared_ptr<const detail::State> state_;
  std::string feedback_;
  std::vector<ProofPtr> closed_;
  std::optional<Sequent> refuted_;
  std::vector<Segment> segments_;
};

// Per-call budget: the total size of the formulae in the sequent.
inline size_t step_bound(const Sequent& s) { return s.weight(); }

// Eager a-posteriori weakening: drops from every gamma the formulae the proof
// never uses.
ProofPtr prune(const ProofPtr& proof);

class Kernel {
 public:
  explicit Kernel(TheoryPtr theory, KernelOptions options = {})
      : cfg_(std::make_shared<detail::Config>(detail::Config{std::move(theory), options})) {}

  Output machine(const Sequent& statement) const;
  const DecisionProcedure& theory() const { return *cfg_->theory; }
  const TheoryPtr& theory_ptr() const { return cfg_->theory; }

 private:
  std::shared_ptr<const detail::Config> cfg_;
};

// ---------------------------------------------------------------------------
// Implementation

namespace detail {

// Raised inside one run when the current alternative cannot close.
struct LocalFailure {
  std::string why;
};

inline std::vector<size_t> focus_candidates(const Sequent& s) {
  std::vector<size_t> out;
  const auto& g = s.gamma();
  for (size_t i = 0; i < g.size(); ++i)
    if (!(g[i].is_literal() && s.pol().contains(g[i].literal()))) out.push_back(i);
  return out;
}

inline LiteralSet literals_occurring(const FormulaSet& gamma) {
  std::vector<Literal> out;
  for (const auto& f : gamma)
    for_each_literal(f, [&](const Literal& l) {
      out.push_back(l);
      out.push_back(l.negate());
    });
  return LiteralSet(std::move(out));
}

struct Run {
  explicit Run(const Config& c) : cfg(c) {}
  const Config& cfg;
  std::vector<ProofPtr> closed;
  std::vector<Segment> segments;
  size_t steps = 0;
  size_t budget = 0;
  bool in_segment = false;

  void begin(size_t b) {
    steps = 0;
    budget = b;
    in_segment = true;
  }
  void end() {
    if (!in_segment) return;
    segments.push_back({steps, budget});
    in_segment = false;
    if (steps > budget)
      throw KernelBug("step bound exceeded: " + std::to_string(steps) + " > " + std::to_string(budget));
  }
  void step() { ++steps; }
};

struct Engine {
  // ---- node constructors

  static SNodePtr developed_leaf(Sequent s) {
    auto n = std::make_shared<SNode>();
    n->state = NodeState::Developed;
    n->open = 1;
    n->focus_tried = std::make_shared<const std::vector<bool>>(s.gamma().size(), false);
    n->seq = std::move(s);
    return n;
  }
  static SNodePtr pending_leaf(Sequent s) {
    auto n = std::make_shared<SNode>();
    n->state = NodeState::Pending;
    n->open = 1;
    n->seq = std::move(s);
    return n;
  }
  static SNodePtr or_pause(Sequent s, uint8_t sides_tried) {
    auto n = std::make_shared<SNode>();
    n->state = NodeState::OrPause;
    n->open = 1;
    n->seq = std::move(s);
    n->sides_tried = sides_tried;
    return n;
  }
  static SNodePtr closed_leaf(Run& run, Rule rule, Sequent s, std::optional<LiteralSet> cert = {},
                              ProofPtr reused = nullptr) {
    auto n = std::make_shared<SNode>();
    n->state = NodeState::Closed;
    n->rule = rule;
    n->proof = make_proof(rule, s, {}, std::move(cert), std::move(reused));
    n->seq = std::move(s);
    if (n->seq.developed()) run.closed.push_back(n->proof);
    return n;
  }
  // Internal node; collapses into a Closed one when every premise is closed.
  static SNodePtr internal(Run& run, Rule rule, Sequent s, std::vector<SNodePtr> kids,
                           std::optional<LiteralSet> cert = {}, const SNode* bookkeeping = nullptr) {
    auto n = std::make_shared<SNode>();
    n->rule = rule;
    n->seq = std::move(s);
    n->cert = std::move(cert);
    if (bookkeeping) {
      n->focus_tried = bookkeeping->focus_tried;
      n->init2_tried = bookkeeping->init2_tried;
      n->sides_tried = bookkeeping->sides_tried;
      n->chosen = bookkeeping->chosen;
    }
    for (const auto& k : kids) n->open += k->open;
    n->kids = std::move(kids);
    if (n->open == 0) close(run, *n);
    else n->state = NodeState::Internal;
    return n;
  }
  static void close(Run& run, SNode& n) {
    std::vector<ProofPtr> prems;
    for (const auto& k : n.kids) prems.push_back(k->proof);
    n.proof = make_proof(n.rule, n.seq, std::move(prems), n.cert);
    n.kids.clear();
    n.state = NodeState::Closed;
    if (n.seq.developed()) run.closed.push_back(n.proof);
  }

  // ---- phases

  // Asynchronous phase.  `guard` is the developed sequent the enclosing focus
  // started from: reaching it again means the focus made no progress.
  static SNodePtr async(Run& run, Sequent s, const Sequent* guard) {
    if (s.developed()) {
      if (guard && s.gamma().size() == guard->gamma().size() &&
          s.pol().size() == guard->pol().size())
        throw LocalFailure{"focus reproduces its own conclusion"};
      return developed_leaf(std::move(s));
    }
    run.step();
    const auto& d = s.delta();
    const Formula a = d.front();
    std::vector<Formula> rest(d.begin() + 1, d.end());
    auto front = [&](std::initializer_list<Formula> fs) {
      std::vector<Formula> v(fs);
      v.insert(v.end(), rest.begin(), rest.end());
      return v;
    };
    switch (a.connective()) {
      case Connective::AndNeg: {
        auto left = async(run, Sequent::unfocused(s.gamma(), front({a.left()}), s.pol()), guard);
        Sequent rs = Sequent::unfocused(s.gamma(), front({a.right()}), s.pol());
        // The right premise is deferred when it shares the rest of delta, so
        // that no formula is decomposed twice within one run.
        auto right = rest.empty() ? async(run, std::move(rs), guard) : pending_leaf(std::move(rs));
        return internal(run, Rule::AndNeg, std::move(s), {left, right});
      }
      case Connective::OrNeg: {
        auto kid = async(run, Sequent::unfocused(s.gamma(), front({a.left(), a.right()}), s.pol()), guard);
        return internal(run, Rule::OrNeg, std::move(s), {kid});
      }
      case Connective::FalseNeg: {
        auto kid = async(run, Sequent::unfocused(s.gamma(), rest, s.pol()), guard);
        return internal(run, Rule::FalseNeg, std::move(s), {kid});
      }
      case Connective::TrueNeg: return closed_leaf(run, Rule::TrueNeg, std::move(s));
      default: {
        Formula na = negate_formula(a);
        auto kid = async(run, Sequent::unfocused(s.gamma().with(na), rest, polar(s.pol(), na)), guard);
        return internal(run, Rule::Store, std::move(s), {kid});
      }
    }
  }

  // Synchronous phase under focus.
  static SNodePtr sync(Run& run, Sequent s, const Sequent* guard) {
    const Formula f = s.focus();
    switch (f.connective()) {
      case Connective::AndPos: {
        run.step();
        auto l = sync(run, Sequent::focused(s.gamma(), f.left(), s.pol()), guard);
        auto r = sync(run, Sequent::focused(s.gamma(), f.right(), s.pol()), guard);
        return internal(run, Rule::AndPos, std::move(s), {l, r});
      }
      case Connective::OrPos: return or_pause(std::move(s), 0);
      case Connective::TruePos:
        run.step();
        return closed_leaf(run, Rule::TruePos, std::move(s));
      case Connective::FalsePos: throw LocalFailure{"false+ under focus"};
      case Connective::Lit:
        if (s.pol().contains(f.literal())) {
          run.step();
          auto cert = run.cfg.theory->consistency(atm(s.gamma(), s.pol()).with(f.literal().negate()));
          if (!cert) throw LocalFailure{"theory finds " + f.literal().to_string() + " not entailed"};
          return closed_leaf(run, Rule::Init1, std::move(s), std::move(cert));
        }
        [[fallthrough]];
      default: {
        auto kid = async(run, Sequent::unfocused(s.gamma(), {f}, s.pol()), guard);
        return internal(run, Rule::Release, std::move(s), {kid});
      }
    }
  }

  // ---- tree navigation

  using Path = std::vector<uint32_t>;

  static const SNode* at(const SNodePtr& root, const Path& p, size_t depth = SIZE_MAX) {
    const SNode* n = root.get();
    for (size_t i = 0; i < p.size() && i < depth; ++i) n = n->kids[p[i]].get();
    return n;
  }

  static bool is_leaf(const SNode& n) {
    return n.state == NodeState::Developed || n.state == NodeState::OrPause ||
           n.state == NodeState::Pending;
  }

  // Replaces the node at `p` and rebuilds its ancestors, closing those whose
  // premises are now all closed.
  static SNodePtr install(Run& run, const SNodePtr& node, const Path& p, size_t i, SNodePtr repl) {
    if (i == p.size()) return repl;
    auto copy = std::make_shared<SNode>(*node);
    copy->kids[p[i]] = install(run, node->kids[p[i]], p, i + 1, std::move(repl));
    copy->open = 0;
    for (const auto& k : copy->kids) copy->open += k->open;
    if (copy->open == 0) close(run, *copy);
    return copy;
  }

  static bool leftmost_open(const SNode* n, Path& p) {
    if (n->open == 0) return false;
    while (!is_leaf(*n)) {
      uint32_t i = 0;
      while (n->kids[i]->open == 0) ++i;
      p.push_back(i);
      n = n->kids[i].get();
    }
    return true;
  }
  static bool rightmost_open(const SNode* n, Path& p) {
    if (n->open == 0) return false;
    while (!is_leaf(*n)) {
      uint32_t i = static_cast<uint32_t>(n->kids.size() - 1);
      while (n->kids[i]->open == 0) --i;
      p.push_back(i);
      n = n->kids[i].get();
    }
    return true;
  }
  // Nearest open leaf strictly to the given side of `p`.
  static std::optional<Path> neighbour(const SNodePtr& root, const Path& p, Direction dir) {
    for (size_t depth = p.size(); depth-- > 0;) {
      const SNode* parent = at(root, p, depth);
      if (dir == Direction::Right) {
        for (uint32_t j = p[depth] + 1; j < parent->kids.size(); ++j) {
          Path q(p.begin(), p.begin() + depth);
          q.push_back(j);
          if (leftmost_open(parent->kids[j].get(), q)) return q;
        }
      } else {
        for (uint32_t j = p[depth]; j-- > 0;) {
          Path q(p.begin(), p.begin() + depth);
          q.push_back(j);
          if (rightmost_open(parent->kids[j].get(), q)) return q;
        }
      }
    }
    return std::nullopt;
  }

  static bool developed_choice(const SNode& n) {
    return n.state == NodeState::Internal &&
           (n.rule == Rule::Select || n.rule == Rule::Pol || n.rule == Rule::Cut);
  }
  static bool or_choice(const SNode& n) {
    return n.state == NodeState::Internal && (n.rule == Rule::OrPos1 || n.rule == Rule::OrPos2);
  }
  // Depths of the ancestors of the current goal whose choice can be retracted.
  static std::vector<size_t> retractable(const State& st) {
    std::vector<size_t> out;
    const SNode* n = st.root.get();
    for (size_t d = 0; d < st.current.size(); ++d) {
      if (developed_choice(*n) || or_choice(*n)) out.push_back(d);
      n = n->kids[st.current[d]].get();
    }
    return out;
  }

  static const Sequent* guard_for(const SNodePtr& root, const Path& p) {
    const Sequent* g = nullptr;
    const SNode* n = root.get();
    for (size_t d = 0; d < p.size(); ++d) {
      if (n->state == NodeState::Internal) {
        if (n->rule == Rule::Select) g = &n->seq;
        else if (n->rule == Rule::Pol || n->rule == Rule::Cut) g = nullptr;
      }
      n = n->kids[p[d]].get();
    }
    return g;
  }

  static bool exhausted(const SNode& d) {
    if (!d.init2_tried) return false;
    for (size_t i : focus_candidates(d.seq))
      if (!(*d.focus_tried)[i]) return false;
    return true;
  }

  // Re-opens the developed sequent of `n` with the given alternative refuted.
  static SNodePtr reopen_developed(const SNode& n, std::optional<size_t> refuted_focus,
                                   bool refuted_init2) {
    auto d = std::make_shared<SNode>();
    d->state = NodeState::Developed;
    d->open = 1;
    d->seq = n.seq;
    auto tried = std::make_shared<std::vector<bool>>(*n.focus_tried);
    if (refuted_focus) (*tried)[*refuted_focus] = true;
    d->focus_tried = std::move(tried);
    d->init2_tried = n.init2_tried || refuted_init2;
    return d;
  }

  // ---- outputs

  static Answer provable(const State& st, const ProofPtr& proof) {
    return Answer(true, st.statement, prune(proof), st.cfg->theory.get());
  }
  static Answer not_provable(const Sequent& s, const Config& cfg) {
    return Answer(false, s, nullptr, cfg.theory.get());
  }

  static Output finish(Run& run, Output out) {
    run.end();
    out.closed_ = std::move(run.closed);
    out.segments_ = std::move(run.segments);
    return out;
  }

  static Output jackpot(Run& run, std::shared_ptr<State> st, Answer a,
                        std::optional<Sequent> refuted = std::nullopt) {
    Output out;
    out.answer_ = std::move(a);
    out.state_ = std::move(st);
    out.refuted_ = std::move(refuted);
    return finish(run, std::move(out));
  }

  // Refuting a developed sequent refutes the statement: every developed
  // sequent reached from it extends an invertible premise by weakening only.
  static Output refute(Run& run, std::shared_ptr<State> st, const Sequent& d) {
    Answer a = not_provable(st->statement, *st->cfg);
    return jackpot(run, std::move(st), std::move(a), d);
  }

  // Picks the goal to offer next, starting from the open leaf at or after
  // `from`, processing deferred asynchronous premises on the way.
  static Output settle(Run& run, std::shared_ptr<State> st, Path from, std::string feedback = {}) {
    run.end();
    for (;;) {
      if (st->root->open == 0) return jackpot(run, st, provable(*st, st->root->proof));
      // Ancestors closed by the last update have dropped their premises.
      {
        const SNode* n = st->root.get();
        size_t d = 0;
        while (d < from.size() && n->state == NodeState::Internal) n = n->kids[from[d++]].get();
        from.resize(d);
      }
      Path p = from;
      const SNode* n = at(st->root, p);
      if (!(n->open > 0 && leftmost_open(n, p))) {
        if (auto q = neighbour(st->root, from, Direction::Right)) {
          p = *q;
        } else {
          p.clear();
          leftmost_open(st->root.get(), p);
        }
      }
      const SNode* leaf = at(st->root, p);
      if (leaf->state != NodeState::Pending) {
        st->current = p;
        Output out;
        out.state_ = std::move(st);
        out.feedback_ = std::move(feedback);
        return finish(run, std::move(out));
      }
      run.begin(step_bound(leaf->seq));
      const Sequent* guard = guard_for(st->root, p);
      try {
        SNodePtr built = async(run, leaf->seq, guard);
        st->root = install(run, st->root, p, 0, built);
        run.end();
        from = p;
      } catch (const LocalFailure& f) {
        run.end();
        return fail_upwards(run, std::move(st), p, f.why);
      }
    }
  }

  // The alternative containing `p` failed: retreat to the nearest choice
  // point, mark it refuted, and either re-offer it or refute its sequent.
  static Output fail_upwards(Run& run, std::shared_ptr<State> st, const Path& p, const std::string& why) {
    for (size_t depth = p.size(); depth-- > 0;) {
      Path q(p.begin(), p.begin() + depth);
      const SNode* n = at(st->root, q);
      if (or_choice(*n)) {
        uint8_t sides = n->sides_tried | (n->rule == Rule::OrPos1 ? 1 : 2);
        if (sides != 3) {
          st->root = install(run, st->root, q, 0, or_pause(n->seq, sides));
          return settle(run, std::move(st), q, why);
        }
      } else if (n->state == NodeState::Internal && n->rule == Rule::Select) {
        SNodePtr d = reopen_developed(*n, n->chosen, false);
        if (exhausted(*d)) return refute(run, std::move(st), d->seq);
        st->root = install(run, st->root, q, 0, d);
        return settle(run, std::move(st), q, why);
      }
    }
    throw KernelBug("failure outside any choice point: " + why);
  }

  static Output start(const std::shared_ptr<const Config>& cfg, const Sequent& statement) {
    if (statement.is_focused()) throw MalformedStatement("statement must be unfocused");
    if (!gamma_well_formed(statement.gamma(), statement.pol()))
      throw MalformedStatement("gamma must hold only negative formulae and positive literals");
    auto st = std::make_shared<State>();
    st->cfg = cfg;
    st->statement = statement;
    Run run{*cfg};
    run.begin(step_bound(statement));
    st->root = async(run, statement, nullptr);
    return settle(run, std::move(st), {});
  }

  static void check_developed(const SNode& n) {
    if (n.state != NodeState::Developed) throw IllegalCoin("coin requires a developed goal");
  }

  static Output insert(const Output& out, const Coin& c) {
    if (out.is_jackpot()) throw IllegalCoin("no coin expected after a jackpot");
    const auto& st0 = *out.state_;
    const Config& cfg = *st0.cfg;
    const SNode& goal = *at(st0.root, st0.current);
    auto st = std::make_shared<State>(st0);
    const Path p = st0.current;
    Run run{cfg};
    const Sequent& s = goal.seq;

    return std::visit(
        [&](const auto& k) -> Output {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, coin::Focus>) {
            check_developed(goal);
            if (k.index >= s.gamma().size()) throw IllegalCoin("focus index out of range");
            const Formula& sel = s.gamma()[k.index];
            if (sel.is_literal() && s.pol().contains(sel.literal()))
              throw IllegalCoin("cannot focus on the negation of a negative literal");
            if ((*goal.focus_tried)[k.index]) throw IllegalCoin("focus already refuted");
            run.begin(step_bound(s));
            try {
              auto kid = sync(run, Sequent::focused(s.gamma(), negate_formula(sel), s.pol()), &s);
              SNode book = goal;
              book.chosen = k.index;
              st->root = install(run, st->root, p, 0,
                                 internal(run, Rule::Select, s, {kid}, std::nullopt, &book));
              return settle(run, std::move(st), p);
            } catch (const LocalFailure& f) {
              run.end();
              SNodePtr d = reopen_developed(goal, k.index, false);
              if (exhausted(*d)) return refute(run, std::move(st), s);
              st->root = install(run, st->root, p, 0, d);
              return settle(run, std::move(st), p, f.why);
            }
          } else if constexpr (std::is_same_v<K, coin::Side>) {
            if (goal.state != NodeState::OrPause) throw IllegalCoin("side coin requires a pending disjunction");
            if (k.which != 1 && k.which != 2) throw IllegalCoin("side must be 1 or 2");
            uint8_t bit = k.which == 1 ? 1 : 2;
            if (goal.sides_tried & bit) throw IllegalCoin("side already refuted");
            run.begin(step_bound(s));
            run.step();
            const Formula& f = s.focus();
            try {
              auto kid = sync(run, Sequent::focused(s.gamma(), k.which == 1 ? f.left() : f.right(), s.pol()),
                              guard_for(st->root, p));
              st->root = install(run, st->root, p, 0,
                                 internal(run, k.which == 1 ? Rule::OrPos1 : Rule::OrPos2, s, {kid},
                                          std::nullopt, &goal));
              return settle(run, std::move(st), p);
            } catch (const LocalFailure& f) {
              run.end();
              uint8_t sides = goal.sides_tried | bit;
              // Both disjuncts refuted: the pause itself fails.
              if (sides == 3) return fail_upwards(run, std::move(st), p, f.why);
              st->root = install(run, st->root, p, 0, or_pause(s, sides));
              return settle(run, std::move(st), p, f.why);
            }
          } else if constexpr (std::is_same_v<K, coin::Polarise>) {
            check_developed(goal);
            if (s.pol().classify(k.lit) != Polarity::Unpolarised)
              throw IllegalCoin(k.lit.to_string() + " is already polarised");
            if (!occurs_in(k.lit, s.gamma())) throw IllegalCoin(k.lit.to_string() + " does not occur in gamma");
            auto cert = cfg.theory->consistency(atm(s.gamma(), s.pol()).with(k.lit.negate()));
            if (!cert) throw IllegalCoin("theory does not entail " + k.lit.to_string());
            run.begin(step_bound(s));
            auto kid = developed_leaf(Sequent::unfocused(s.gamma(), {}, s.pol().polar(k.lit)));
            st->root = install(run, st->root, p, 0, internal(run, Rule::Pol, s, {kid}, std::move(cert), &goal));
            return settle(run, std::move(st), p);
          } else if constexpr (std::is_same_v<K, coin::CutLit>) {
            check_developed(goal);
            if (!cfg.options.allow_cuts) throw IllegalCoin("cuts are disabled");
            if (!occurs_in(k.lit, s.gamma())) throw IllegalCoin(k.lit.to_string() + " does not occur in gamma");
            if (s.gamma().contains(Formula::lit(k.lit)) || s.gamma().contains(Formula::lit(k.lit.negate())))
              throw IllegalCoin(k.lit.to_string() + " is already decided in gamma");
            run.begin(step_bound(s));
            Formula kf = Formula::lit(k.lit);
            auto left = async(run, Sequent::unfocused(s.gamma(), {kf}, s.pol()), nullptr);
            auto right = async(run, Sequent::unfocused(s.gamma(), {negate_formula(kf)}, s.pol()), nullptr);
            st->root = install(run, st->root, p, 0, internal(run, Rule::Cut, s, {left, right}, std::nullopt, &goal));
            return settle(run, std::move(st), p);
          } else if constexpr (std::is_same_v<K, coin::ConsistencyCheck>) {
            check_developed(goal);
            if (goal.init2_tried) throw IllegalCoin("consistency check already failed here");
            run.begin(step_bound(s));
            if (auto cert = cfg.theory->consistency(atm(s.gamma(), s.pol()))) {
              st->root = install(run, st->root, p, 0, closed_leaf(run, Rule::Init2, s, std::move(cert)));
              return settle(run, std::move(st), p);
            }
            run.end();
            SNodePtr d = reopen_developed(goal, std::nullopt, true);
            if (exhausted(*d)) return refute(run, std::move(st), s);
            st->root = install(run, st->root, p, 0, d);
            return settle(run, std::move(st), p, "theory finds the positive literals consistent");
          } else if constexpr (std::is_same_v<K, coin::Memo>) {
            check_developed(goal);
            const Answer& a = k.answer;
            if (a.theory() != cfg.theory.get()) throw IllegalCoin("answer comes from another theory");
            if (!a.statement().developed()) throw IllegalCoin("answer is not about a developed sequent");
            if (a.provable()) {
              if (!a.key().subset_of(s.gamma())) throw IllegalCoin("memoised proof does not apply");
              run.begin(0);
              st->root = install(run, st->root, p, 0, closed_leaf(run, Rule::MemoHit, s, std::nullopt, a.proof()));
              return settle(run, std::move(st), p);
            }
            if (!s.gamma().subset_of(a.key())) throw IllegalCoin("memoised refutation does not apply");
            return refute(run, std::move(st), s);
          } else {
            return move_next(run, std::move(st), k);
          }
        },
        c);
  }

  static Output move_next(Run& run, std::shared_ptr<State> st, const coin::MoveNext& k) {
    if (k.kind == BranchKind::Success) {
      auto q = neighbour(st->root, st->current, k.direction);
      if (!q) throw IllegalCoin("no open branch in that direction");
      return settle(run, std::move(st), *q);
    }
    auto depths = retractable(*st);
    if (depths.empty()) throw IllegalCoin("no choice to retract");
    size_t depth = k.direction == Direction::Right ? depths.back() : depths.front();
    Path q(st->current.begin(), st->current.begin() + depth);
    const SNode* n = at(st->root, q);
    SNodePtr reopened = or_choice(*n) ? or_pause(n->seq, n->sides_tried)
                                      : reopen_developed(*n, std::nullopt, false);
    st->root = install(run, st->root, q, 0, reopened);
    return settle(run, std::move(st), q);
  }

  static std::vector<Coin> legal(const Output& out) {
    std::vector<Coin> coins;
    if (out.is_jackpot()) return coins;
    const State& st = *out.state_;
    const SNode& goal = *at(st.root, st.current);
    const Sequent& s = goal.seq;
    if (goal.state == NodeState::OrPause) {
      if (!(goal.sides_tried & 1)) coins.push_back(coin::Side{1});
      if (!(goal.sides_tried & 2)) coins.push_back(coin::Side{2});
    } else {
      for (size_t i : focus_candidates(s))
        if (!(*goal.focus_tried)[i]) coins.push_back(coin::Focus{i});
      if (!goal.init2_tried) coins.push_back(coin::ConsistencyCheck{});
      LiteralSet lits = literals_occurring(s.gamma());
      LiteralSet model = atm(s.gamma(), s.pol());
      for (const auto& l : lits)
        if (s.pol().classify(l) == Polarity::Unpolarised && st.cfg->theory->consistency(model.with(l.negate())))
          coins.push_back(coin::Polarise{l});
      if (st.cfg->options.allow_cuts)
        for (const auto& l : lits)
          if (!s.gamma().contains(Formula::lit(l)) && !s.gamma().contains(Formula::lit(l.negate())))
            coins.push_back(coin::CutLit{l});
    }
    for (auto dir : {Direction::Left, Direction::Right})
      if (neighbour(st.root, st.current, dir)) coins.push_back(coin::MoveNext{dir, BranchKind::Success});
    if (!retractable(st).empty()) {
      coins.push_back(coin::MoveNext{Direction::Left, BranchKind::Failure});
      coins.push_back(coin::MoveNext{Direction::Right, BranchKind::Failure});
    }
    return coins;
  }

  static ProofPtr snapshot(const SNodePtr& n) {
    switch (n->state) {
      case NodeState::Closed: return n->proof;
      case NodeState::Internal: {
        std::vector<ProofPtr> prems;
        for (const auto& k : n->kids) prems.push_back(snapshot(k));
        return make_proof(n->rule, n->seq, std::move(prems), n->cert);
      }
      default: return open_leaf(n->seq);
    }
  }

  static std::vector<Answer> closed_answers(const Output& out) {
    std::vector<Answer> v;
    if (!out.state_) return v;
    const Config& cfg = *out.state_->cfg;
    for (const auto& p : out.closed_) {
      ProofPtr pruned = prune(p);
      v.push_back(Answer(true, p->conclusion, pruned, cfg.theory.get()));
    }
    if (out.refuted_) v.push_back(not_provable(*out.refuted_, cfg));
    return v;
  }
};

// ---- pruning

inline FormulaSet witness_for(const Literal& l, const FormulaSet& gamma, const FormulaSet& needs) {
  for (const auto& f : needs)
    if (occurs_in(l, f)) return {};
  for (const auto& f : gamma)
    if (occurs_in(l, f)) return FormulaSet{f};
  return {};
}

inline FormulaSet certificate_needs(const ProofTree& n) {
  std::vector<Formula> out;
  if (n.certificate)
    for (const auto& l : *n.certificate) {
      Formula f = Formula::lit(l);
      if (n.conclusion.gamma().contains(f)) out.push_back(f);
    }
  return FormulaSet(std::move(out));
}

class Pruner {
 public:
  ProofPtr run(const ProofPtr& p) { return rebuild(p, needs(p)); }

 private:
  const FormulaSet& needs(const ProofPtr& p) {
    if (auto it = memo_.find(p.get()); it != memo_.end()) return it->second;
    const ProofTree& n = *p;
    const FormulaSet& g = n.conclusion.gamma();
    FormulaSet acc;
    for (const auto& q : n.premises) acc = acc.unite(needs(q));
    acc = acc.intersect(g);
    switch (n.rule) {
      case Rule::Init1:
      case Rule::Init2: acc = acc.unite(certificate_needs(n)); break;
      case Rule::Select: acc.insert(negate_formula(n.premises[0]->conclusion.focus())); break;
      case Rule::Pol: {
        acc = acc.unite(certificate_needs(n));
        const auto& pp = n.premises[0]->conclusion.pol();
        for (const auto& l : pp.literals())
          if (!n.conclusion.pol().contains(l)) acc = acc.unite(witness_for(l, g, acc));
        break;
      }
      case Rule::Cut:
        acc = acc.unite(witness_for(n.premises[0]->conclusion.delta()[0].literal(), g, acc));
        break;
      case Rule::MemoHit: acc = acc.unite(n.reused->conclusion.gamma().intersect(g)); break;
      default: break;
    }
    return memo_.emplace(p.get(), std::move(acc)).first->second;
  }

  ProofPtr rebuild(const ProofPtr& p, const FormulaSet& gamma) {
    const ProofTree& n = *p;
    if (gamma == n.conclusion.gamma()) return p;
    std::vector<ProofPtr> prems;
    for (const auto& q : n.premises) {
      FormulaSet g = gamma;
      if (n.rule == Rule::Store) g.insert(negate_formula(n.conclusion.delta()[0]));
      prems.push_back(rebuild(q, g));
    }
    return make_proof(n.rule, n.conclusion.with_gamma(gamma), std::move(prems), n.certificate, n.reused);
  }

  std::unordered_map<const ProofTree*, FormulaSet> memo_;
};

}  // namespace detail

inline ProofPtr prune(const ProofPtr& proof) { return detail::Pruner().run(proof); }

inline const Sequent& Output::goal() const {
  if (!state_ || answer_) throw std::logic_error("output has no goal");
  return detail::Engine::at(state_->root, state_->current)->seq;
}
inline std::vector<Coin> Output::legal_coins() const { return detail::Engine::legal(*this); }
inline std::vector<size_t> Output::focus_candidates() const { return detail::focus_candidates(goal()); }
inline Output Output::insert(const Coin& c) const { return detail::Engine::insert(*this, c); }
inline std::vector<Answer> Output::closed_answers() const { return detail::Engine::closed_answers(*this); }
inline ProofPtr Output::snapshot() const { return detail::Engine::snapshot(state_->root); }
inline size_t Output::open_branches() const { return state_->root->open; }

inline Output Kernel::machine(const Sequent& statement) const {
  return detail::Engine::start(cfg_, statement);
}

}  // namespace lkt

#endif  // LKT_KERNEL_HPP
