#pragma once

#include <span>
#include <string>
#include <vector>

#include "fuzzband/interval.hpp"

namespace fuzzband {

// Uniform grid of alpha levels 0 = a_0 < a_1 < ... < a_K = 1 with a_i = i/K.
struct AlphaGrid {
  int cells;

  explicit AlphaGrid(int k) : cells(k) {
    if (k < 2) throw std::invalid_argument("alpha grid needs at least 2 cells");
  }
  int node_count() const { return cells + 1; }
  double node(int i) const { return static_cast<double>(i) / cells; }

  friend bool operator==(const AlphaGrid&, const AlphaGrid&) = default;
};

enum class BandDefect {
  none,
  bad_size,
  nonfinite,
  crossing,          // lower[i] > upper[i]
  lower_not_monotone,
  upper_not_monotone,
};

// Outcome of a band invariant check; index is the first offending node.
struct Validity {
  bool ok = true;
  BandDefect defect = BandDefect::none;
  int index = -1;
  std::string message;
};

// Checks the band invariants (finiteness, lower <= upper, nestedness) with
// tolerance `tol`.  Violations are reported, never repaired.
Validity validate_band(const AlphaGrid& grid, std::span<const double> lower,
                       std::span<const double> upper, double tol = 1e-9);

// A fuzzy number represented by its alpha-level bands on a uniform alpha
// grid: level(i) = [lower[i], upper[i]] at alpha = i/K, piecewise linear in
// alpha in between.  Nestedness (lower nondecreasing, upper nonincreasing)
// plus the linear interpolation make the level map alpha -> [u]^alpha
// continuous, so every instance has continuous level sets.
//
// Instances are immutable after construction; all operations below are pure.
class FuzzyNumber {
 public:
  // Throws std::invalid_argument when the band violates an invariant.
  FuzzyNumber(AlphaGrid grid, std::vector<double> lower,
              std::vector<double> upper);

  static FuzzyNumber crisp(const AlphaGrid& grid, double c);
  // Support [l, r], core {m}; requires l <= m <= r.
  static FuzzyNumber triangular(const AlphaGrid& grid, double l, double m,
                                double r);

  const AlphaGrid& grid() const { return grid_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

  Interval level(int i) const { return {lower_[i], upper_[i]}; }
  Interval support() const { return level(0); }
  Interval core() const { return level(grid_.cells); }

  // Piecewise-linear interpolation of the band at alpha in [0, 1].
  Interval level_at(double alpha) const;

 private:
  AlphaGrid grid_;
  std::vector<double> lower_, upper_;
};

Validity validate(const FuzzyNumber& u, double tol = 1e-9);

FuzzyNumber add(const FuzzyNumber& u, const FuzzyNumber& v);

// Levelwise scalar multiple; negative factors swap the endpoints.
FuzzyNumber scale(double lambda, const FuzzyNumber& u);

// Supremum over alpha of the Hausdorff distance between level sets.  With
// piecewise-linear bands on a shared grid the supremum is attained at a
// grid node, so the node maximum is exact for the represented class.
double distance(const FuzzyNumber& u, const FuzzyNumber& v);

// Image of a fuzzy number under u -> (u^-, u^+), a curve in C([0,1], R^2)
// tabulated on the alpha grid.
struct EndpointCurves {
  AlphaGrid grid;
  std::vector<double> lower, upper;
};

EndpointCurves embed(const FuzzyNumber& u);

// Sup norm distance in C([0,1], R^2) with the max norm on R^2.  The
// embedding is an isometry: this equals distance(u, v).
double sup_distance(const EndpointCurves& f, const EndpointCurves& g);

// Halve the alpha resolution by keeping every other node (cells must be
// even).  Used for grid-refinement sensitivity reporting.
FuzzyNumber coarsen(const FuzzyNumber& u);

}  // namespace fuzzband
