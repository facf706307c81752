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

// Memo table of kernel answers, looked up by subsumption.
//
// A provable entry for gamma' answers every goal gamma with gamma' <= gamma
// (weakening); a refuted entry for gamma' answers every gamma <= gamma'.  Both
// halves are kept as antichains.

#ifndef LKT_MEMO_HPP
#define LKT_MEMO_HPP

#include <algorithm>
#include <optional>
#include <ostream>
#include <vector>

#include "lkt/kernel.hpp"

namespace lkt {

class MemoStore {
 public:
  // Returns whether the answer was stored.  Answers about sequents that are
  // not developed carry no reusable key and are ignored.
  bool insert(const Answer& a) {
    if (!a.statement().developed()) return false;
    const FormulaSet& key = a.key();
    auto& entries = a.provable() ? provable_ : refuted_;
    // `covers(x, y)`: entry x makes entry y redundant.
    auto covers = [&](const FormulaSet& x, const FormulaSet& y) {
      return a.provable() ? x.subset_of(y) : y.subset_of(x);
    };
    for (const auto& e : entries)
      if (covers(e.key(), key)) return false;
    std::erase_if(entries, [&](const Answer& e) { return covers(key, e.key()); });
    entries.push_back(a);
    ++inserted_;
    return true;
  }

  std::optional<Answer> lookup(const FormulaSet& goal) const {
    for (const auto& e : provable_)
      if (e.key().subset_of(goal)) return e;
    for (const auto& e : refuted_)
      if (goal.subset_of(e.key())) return e;
    return std::nullopt;
  }

  const std::vector<Answer>& provable_entries() const { return provable_; }
  const std::vector<Answer>& refuted_entries() const { return refuted_; }
  size_t size() const { return provable_.size() + refuted_.size(); }
  size_t insertions() const { return inserted_; }
  void clear() {
    provable_.clear();
    refuted_.clear();
  }

  // One line per entry: tag, sorted key, and an id naming the entry's proof.
  void dump(std::ostream& os) const {
    size_t id = 0;
    auto line = [&](char tag, const Answer& a) {
      os << tag << " {";
      bool first = true;
      for (const auto& f : a.key()) {
        os << (first ? "" : ", ") << f.to_string();
        first = false;
      }
      os << "} #" << id++ << '\n';
    };
    for (const auto& a : provable_) line('P', a);
    for (const auto& a : refuted_) line('N', a);
  }

 private:
  std::vector<Answer> provable_;
  std::vector<Answer> refuted_;
  size_t inserted_ = 0;
};

}  // namespace lkt

#endif  // LKT_MEMO_HPP
