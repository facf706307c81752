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

#ifndef LKT_SORTED_SET_HPP
#define LKT_SORTED_SET_HPP

#include <algorithm>
#include <initializer_list>
#include <vector>

namespace lkt {

// Flat ordered set.  Elements must be totally ordered by operator<=>.
template <typename T>
class SortedSet {
 public:
  using value_type = T;
  using const_iterator = typename std::vector<T>::const_iterator;

  SortedSet() = default;
  SortedSet(std::initializer_list<T> init) : items_(init) { normalise(); }
  explicit SortedSet(std::vector<T> items) : items_(std::move(items)) { normalise(); }

  // Caller guarantees `items` is already strictly increasing.
  static SortedSet from_sorted(std::vector<T> items) {
    SortedSet s;
    s.items_ = std::move(items);
    return s;
  }

  bool insert(const T& x) {
    auto it = std::lower_bound(items_.begin(), items_.end(), x);
    if (it != items_.end() && *it == x) return false;
    items_.insert(it, x);
    return true;
  }
  bool erase(const T& x) {
    auto it = std::lower_bound(items_.begin(), items_.end(), x);
    if (it == items_.end() || !(*it == x)) return false;
    items_.erase(it);
    return true;
  }
  SortedSet with(const T& x) const {
    SortedSet s = *this;
    s.insert(x);
    return s;
  }
  bool contains(const T& x) const { return index_of(x) != npos; }
  static constexpr size_t npos = static_cast<size_t>(-1);
  size_t index_of(const T& x) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), x);
    if (it == items_.end() || !(*it == x)) return npos;
    return static_cast<size_t>(it - items_.begin());
  }
  bool subset_of(const SortedSet& other) const {
    return items_.size() <= other.items_.size() &&
           std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
  }
  SortedSet unite(const SortedSet& other) const {
    std::vector<T> out;
    out.reserve(items_.size() + other.items_.size());
    std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                   std::back_inserter(out));
    return from_sorted(std::move(out));
  }
  SortedSet intersect(const SortedSet& other) const {
    std::vector<T> out;
    std::set_intersection(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                          std::back_inserter(out));
    return from_sorted(std::move(out));
  }

  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }
  size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const T& operator[](size_t i) const { return items_[i]; }
  const std::vector<T>& items() const { return items_; }

  friend bool operator==(const SortedSet& a, const SortedSet& b) { return a.items_ == b.items_; }
  friend auto operator<=>(const SortedSet& a, const SortedSet& b) {
    return std::lexicographical_compare_three_way(a.items_.begin(), a.items_.end(),
                                                  b.items_.begin(), b.items_.end());
  }

 private:
  void normalise() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }
  std::vector<T> items_;
};

}  // namespace lkt

#endif  // LKT_SORTED_SET_HPP
