#pragma once

#include <random>
#include <vector>

#include "fuzzband/fuzzy_number.hpp"
#include "fuzzband/quadrature.hpp"

namespace fuzzband::testing {

// Random valid band: pick a core interval, then widen outward toward
// alpha = 0 by nonnegative steps, which enforces nestedness by construction.
inline FuzzyNumber random_fuzzy(std::mt19937_64& rng, const AlphaGrid& grid,
                                double center_span = 2.0,
                                double step_span = 0.25) {
  std::uniform_real_distribution<double> center(-center_span, center_span);
  std::uniform_real_distribution<double> step(0.0, step_span);
  const int k = grid.cells;
  std::vector<double> lower(k + 1), upper(k + 1);
  const double m1 = center(rng);
  const double m2 = m1 + step(rng);
  lower[k] = m1;
  upper[k] = m2;
  for (int i = k; i-- > 0;) {
    lower[i] = lower[i + 1] - step(rng);
    upper[i] = upper[i + 1] + step(rng);
  }
  return FuzzyNumber(grid, std::move(lower), std::move(upper));
}

inline FuzzyTrajectory random_trajectory(std::mt19937_64& rng,
                                         const TimeGrid& grid,
                                         const AlphaGrid& alpha,
                                         double center_span = 2.0,
                                         double step_span = 0.25) {
  std::vector<FuzzyNumber> vals;
  vals.reserve(grid.nodes.size());
  for (size_t j = 0; j < grid.nodes.size(); ++j)
    vals.push_back(random_fuzzy(rng, alpha, center_span, step_span));
  return FuzzyTrajectory(grid, std::move(vals));
}

}  // namespace fuzzband::testing
