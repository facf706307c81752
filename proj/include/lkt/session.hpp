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

// One human-driven search, spoken in JSON frames.
//
//   server -> client  {"type":"state", "goal", "proof", "coins":[{"id","kind","description"}]}
//                     {"type":"jackpot", "answer":"provable"|"notprovable", "sequent", "proof-id"}
//                     {"type":"illegal", "reason"}
//                     {"type":"proof", "id", "proof"}
//   client -> server  {"type":"coin", "id"}
//                     {"type":"proof", "id"}

#ifndef LKT_SESSION_HPP
#define LKT_SESSION_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lkt/kernel.hpp"
#include "lkt/proof_io.hpp"

namespace lkt {

inline std::string describe(const Coin& c, const Sequent& goal) {
  return std::visit(
      [&](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, coin::Focus>)
          return "select " + goal.gamma()[k.index].to_string() + " and focus on its negation";
        if constexpr (std::is_same_v<K, coin::Side>)
          return std::string("prove the ") + (k.which == 1 ? "left" : "right") + " disjunct of " +
                 goal.focus().to_string();
        if constexpr (std::is_same_v<K, coin::Polarise>) return "make " + k.lit.to_string() + " positive";
        if constexpr (std::is_same_v<K, coin::CutLit>) return "cut on " + k.lit.to_string();
        if constexpr (std::is_same_v<K, coin::ConsistencyCheck>)
          return "close the branch if the positive literals are theory-inconsistent";
        if constexpr (std::is_same_v<K, coin::Memo>) return "reuse a stored answer";
        if constexpr (std::is_same_v<K, coin::MoveNext>)
          return std::string(k.kind == BranchKind::Success ? "switch to the open branch on the "
                                                           : "abandon the choice point nearest the ") +
                 (k.kind == BranchKind::Success ? (k.direction == Direction::Left ? "left" : "right")
                                                : (k.direction == Direction::Left ? "root" : "goal"));
      },
      c);
}

// Nested outline of an incomplete proof; nodes past `budget` are elided.
inline nlohmann::json proof_outline(const ProofPtr& p, size_t& budget) {
  nlohmann::json j;
  j["rule"] = std::string(to_string(p->rule));
  j["open"] = p->rule == Rule::Open;
  if (budget == 0) {
    j["truncated"] = true;
    return j;
  }
  --budget;
  j["sequent"] = p->conclusion.to_string();
  nlohmann::json prems = nlohmann::json::array();
  for (const auto& q : p->premises) prems.push_back(proof_outline(q, budget));
  j["premises"] = std::move(prems);
  return j;
}

class Session {
 public:
  Session(std::shared_ptr<const Kernel> kernel, Sequent statement)
      : kernel_(std::move(kernel)), statement_(std::move(statement)) {}

  // Frames to send on connection.
  std::vector<nlohmann::json> start() {
    try {
      out_ = kernel_->machine(statement_);
    } catch (const std::exception& e) {
      return {illegal(std::string("cannot start: ") + e.what())};
    }
    return {current()};
  }

  std::vector<nlohmann::json> handle(const nlohmann::json& msg) {
    if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string())
      return {illegal("frame must be an object with a string 'type'")};
    const std::string type = msg["type"];
    if (type == "proof") {
      std::string id = msg.value("id", std::string());
      auto it = proofs_.find(id);
      if (it == proofs_.end()) return {illegal("unknown proof id '" + id + "'")};
      return {{{"type", "proof"}, {"id", id}, {"proof", proof_to_json(it->second)}}};
    }
    if (type != "coin") return {illegal("unsupported frame type '" + type + "'")};
    if (!out_ || out_->is_jackpot()) return {illegal("session is finished")};
    if (!msg.contains("id") || !msg["id"].is_string()) return {illegal("coin frame needs a string 'id'"), current()};
    const std::string id = msg["id"];
    for (const auto& c : menu_)
      if (coin_id(c) == id) {
        try {
          out_ = out_->insert(c);
          history_.push_back(id);
        } catch (const IllegalCoin& e) {
          return {illegal(e.what()), current()};
        }
        return {current()};
      }
    return {illegal("coin '" + id + "' is not on offer"), current()};
  }

  bool finished() const { return out_ && out_->is_jackpot(); }
  const std::optional<Output>& output() const { return out_; }
  const std::vector<std::string>& history() const { return history_; }

 private:
  static nlohmann::json illegal(const std::string& why) { return {{"type", "illegal"}, {"reason", why}}; }

  nlohmann::json current() {
    const Output& o = *out_;
    if (o.is_jackpot()) {
      menu_.clear();
      const Answer& a = o.answer();
      nlohmann::json j{{"type", "jackpot"}, {"answer", a.provable() ? "provable" : "notprovable"}};
      if (a.provable()) {
        std::string id = "proof-" + std::to_string(proofs_.size() + 1);
        proofs_[id] = a.proof();
        j["sequent"] = a.proof()->conclusion.to_string();
        j["proof-id"] = id;
      } else {
        j["sequent"] = a.statement().to_string();
        j["proof-id"] = nullptr;
      }
      return j;
    }
    menu_ = o.legal_coins();
    nlohmann::json coins = nlohmann::json::array();
    for (const auto& c : menu_)
      coins.push_back({{"id", coin_id(c)}, {"kind", std::string(coin_kind(c))}, {"description", describe(c, o.goal())}});
    size_t budget = 200;
    nlohmann::json j{{"type", "state"}, {"goal", o.goal().to_string()}, {"proof", proof_outline(o.snapshot(), budget)},
                     {"coins", std::move(coins)}};
    if (o.coin_failed()) j["feedback"] = o.feedback();
    return j;
  }

  std::shared_ptr<const Kernel> kernel_;
  Sequent statement_;
  std::optional<Output> out_;
  std::vector<Coin> menu_;
  std::vector<std::string> history_;
  std::map<std::string, ProofPtr> proofs_;
};

}  // namespace lkt

#endif  // LKT_SESSION_HPP
