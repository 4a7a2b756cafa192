#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fuzzband/fuzzy_number.hpp"

namespace fuzzband {

// A finite sample of a family of fuzzy numbers on one shared alpha grid.
struct FamilySample {
  AlphaGrid grid;
  std::vector<FuzzyNumber> members;
  std::string label;

  explicit FamilySample(std::vector<FuzzyNumber> members_,
                        std::string label_ = "");
};

// Uniform bound sup_u D(u, 0) over the sample.
double family_bound(const FamilySample& family);

// Level-equicontinuity modulus: the largest Hausdorff gap between two level
// sets of one member whose alpha nodes are at most `delta` apart.  Evaluated
// on grid-node pairs, which is exact for piecewise-linear bands.
double equicontinuity_modulus(const FamilySample& family, double delta);

// Quantitative verdict for the compactness criterion (uniform bound plus
// level-equicontinuity).  A finite sample is always relatively compact; the
// numbers measure the uniform bound and modulus as evidence about the
// parametric family the sample was drawn from, not as a proof.
struct CompactnessReport {
  double bound = 0.0;
  double bound_cap = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double modulus_at_delta = 0.0;
  // (delta, omega(delta)) for delta = 1/64, 1/32, ..., 1/2.
  std::vector<std::pair<double, double>> modulus;
  bool bounded_verdict = false;
  bool equicontinuous_verdict = false;
  bool verdict = false;
  std::string evidence = "sampled-family evidence";
};

CompactnessReport compactness_verdict(const FamilySample& family,
                                      double bound_cap, double epsilon,
                                      double delta);

}  // namespace fuzzband
