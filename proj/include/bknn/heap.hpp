#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace bknn {

/// One answer: dataset index plus its divergence in the requested direction.
struct Neighbor {
  std::uint32_t index = 0;
  double div = 0.0;
};

/// Neighbors sorted ascending by (div, index).
using ResultSet = std::vector<Neighbor>;

/// Binary max-heap bounded at k entries, keeping the k smallest neighbors
/// under the lexicographic (div, index) order. Ties on div are broken toward
/// the smaller index, so results are fully deterministic. The same heap backs
/// the tree query and the linear-scan oracle.
class BoundedMaxHeap {
 public:
  explicit BoundedMaxHeap(std::size_t k) : k_(k) { entries_.reserve(k_); }

  /// Largest stored divergence, or +inf while fewer than k entries are held.
  double max_divergence() const {
    return entries_.size() < k_ ? std::numeric_limits<double>::infinity() : entries_.front().div;
  }

  std::size_t size() const { return entries_.size(); }

  void offer(std::uint32_t index, double div) {
    if (entries_.size() < k_) {
      entries_.push_back({index, div});
      std::push_heap(entries_.begin(), entries_.end(), worse_);
      return;
    }
    const Neighbor& top = entries_.front();
    if (div < top.div || (div == top.div && index < top.index)) {
      std::pop_heap(entries_.begin(), entries_.end(), worse_);
      entries_.back() = {index, div};
      std::push_heap(entries_.begin(), entries_.end(), worse_);
    }
  }

  /// Drain into a ResultSet sorted ascending by (div, index).
  ResultSet take_sorted() {
    ResultSet out = std::move(entries_);
    entries_.clear();
    std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
      return a.div < b.div || (a.div == b.div && a.index < b.index);
    });
    return out;
  }

 private:
  struct Worse {
    bool operator()(const Neighbor& a, const Neighbor& b) const {
      return a.div < b.div || (a.div == b.div && a.index < b.index);
    }
  };

  std::size_t k_;
  std::vector<Neighbor> entries_;
  Worse worse_{};
};

}  // namespace bknn
