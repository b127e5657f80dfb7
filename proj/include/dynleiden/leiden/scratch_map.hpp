#pragma once
#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>
#include "../types.hpp"

namespace dynleiden {

/**
 * Per-thread community -> weight accumulator.
 * Keys are kept in insertion order; values live in a dense array indexed by
 * community id, so lookups never collide. Clearing touches only used slots.
 */
class ScratchMap {
 public:
  void reserve(std::size_t n) {
    if (values_.size() < n) {
      values_.assign(n, 0);
      used_.assign(n, 0);
      keys_.clear();
    }
  }

  void add(vertex_id c, double w) {
    if (!used_[c]) {
      used_[c] = 1;
      keys_.push_back(c);
    }
    values_[c] += w;
  }

  double get(vertex_id c) const noexcept { return values_[c]; }

  const std::vector<vertex_id>& keys() const noexcept { return keys_; }
  bool empty() const noexcept { return keys_.empty(); }

  void sort_keys() { std::sort(keys_.begin(), keys_.end()); }

  void clear() {
    for (vertex_id c : keys_) {
      values_[c] = 0;
      used_[c] = 0;
    }
    keys_.clear();
  }

 private:
  std::vector<vertex_id> keys_;
  std::vector<double> values_;
  std::vector<std::uint8_t> used_;
};

}  // namespace dynleiden
