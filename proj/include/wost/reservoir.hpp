#pragma once

// Weighted reservoir sampling without replacement (A-Res): keep the k items
// with the largest keys u^(1/w), compared in log space (log(u)/w) so tiny
// weights cannot underflow the key. Single streaming pass, O(log k) insert.

#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "wost/rng.hpp"

namespace wost {

template <typename T>
class WeightedReservoirSampler {
 public:
  explicit WeightedReservoirSampler(size_t capacity) : capacity_(capacity) {}

  void add(T item, double weight, RandomStream& rng) {
    if (capacity_ == 0 || !(weight > 0.0)) return;
    total_weight_ += weight;
    ++seen_;
    double key = std::log(rng.uniform()) / weight;
    if (heap_.size() < capacity_) {
      heap_.push({key, std::move(item)});
    } else if (key > heap_.top().key) {
      heap_.pop();
      heap_.push({key, std::move(item)});
    }
  }

  size_t seen() const { return seen_; }
  double total_weight() const { return total_weight_; }

  std::vector<T> take() {
    std::vector<T> out;
    out.reserve(heap_.size());
    while (!heap_.empty()) {
      out.push_back(std::move(const_cast<Entry&>(heap_.top()).item));
      heap_.pop();
    }
    return out;
  }

 private:
  struct Entry {
    double key;
    T item;
  };
  struct MinKey {
    bool operator()(const Entry& a, const Entry& b) const { return a.key > b.key; }
  };

  size_t capacity_;
  size_t seen_ = 0;
  double total_weight_ = 0.0;
  std::priority_queue<Entry, std::vector<Entry>, MinKey> heap_;
};

}  // namespace wost
