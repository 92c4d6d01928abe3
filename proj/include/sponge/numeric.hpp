#pragma once

#include <cstddef>
#include <vector>

namespace sponge {

// Deterministic pairwise summation: a binary-counter tree reduction whose
// result depends only on the order terms are pushed, not on chunking.
class PairwiseSum {
 public:
  void add(double x) {
    for (std::size_t level = 0;; ++level) {
      if (level == slots_.size()) {
        slots_.push_back(x);
        mask_ |= (1ull << level);
        return;
      }
      if (!occupied(level)) {
        slots_[level] = x;
        mask_ |= (1ull << level);
        return;
      }
      x += slots_[level];
      mask_ &= ~(1ull << level);
    }
  }

  double total() const {
    double out = 0.0;
    for (std::size_t level = 0; level < slots_.size(); ++level)
      if (occupied(level)) out += slots_[level];
    return out;
  }

 private:
  bool occupied(std::size_t level) const { return (mask_ >> level) & 1ull; }
  std::vector<double> slots_;
  unsigned long long mask_ = 0;
};

}  // namespace sponge
