// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace igstqa {

/// Exactly rounded summation of finite doubles (Shewchuk expansion with the
/// usual half-even correction on the final fold). The result depends only on
/// the multiset of addends, not on their order, which makes pooled subband
/// statistics invariant under coefficient permutations such as circular
/// shifts.
class ExactSum {
public:
  void add(double x) {
    std::size_t kept = 0;
    for (double p : parts_) {
      if (std::fabs(x) < std::fabs(p)) {
        const double t = x;
        x = p;
        p = t;
      }
      const double hi = x + p;
      const double lo = p - (hi - x);
      if (lo != 0.0) parts_[kept++] = lo;
      x = hi;
    }
    parts_.resize(kept);
    parts_.push_back(x);
  }

  /// Correctly rounded value of the accumulated exact sum.
  double value() const {
    if (parts_.empty()) return 0.0;
    std::size_t n = parts_.size();
    double hi = parts_[--n];
    double lo = 0.0;
    std::size_t tail = 0;
    while (n > 0) {
      const double x = hi;
      const double y = parts_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) {
        tail = n;
        break;
      }
    }
    // Round half to even across the remaining partials.
    if (tail > 0 && ((lo < 0.0 && parts_[tail - 1] < 0.0) ||
                     (lo > 0.0 && parts_[tail - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

private:
  std::vector<double> parts_;  // non-overlapping, increasing magnitude
};

inline double exact_sum(std::span<const double> values) {
  ExactSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

}  // namespace igstqa
