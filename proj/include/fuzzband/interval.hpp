#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fuzzband {

// Closed real interval [lo, hi]; the value of one alpha-level cut.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
      throw std::invalid_argument("interval endpoints must be finite");
    if (lo > hi) throw std::invalid_argument("interval requires lo <= hi");
  }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Hausdorff-Pompeiu distance between closed intervals.  The sup-inf
// definition collapses to the larger of the two endpoint gaps.
inline double interval_hausdorff(const Interval& a, const Interval& b) {
  return std::max(std::abs(a.lo - b.lo), std::abs(a.hi - b.hi));
}

}  // namespace fuzzband
