#include "fuzzband/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace fuzzband {

FamilySample::FamilySample(std::vector<FuzzyNumber> members_,
                           std::string label_)
    : grid(members_.empty() ? AlphaGrid(2) : members_.front().grid()),
      members(std::move(members_)),
      label(std::move(label_)) {
  if (members.empty())
    throw std::invalid_argument("family sample must not be empty");
  for (const auto& u : members) {
    if (!(u.grid() == grid))
      throw std::invalid_argument("family members must share one alpha grid");
  }
}

double family_bound(const FamilySample& family) {
  double bound = 0.0;
  for (const auto& u : family.members) {
    for (size_t i = 0; i < u.lower().size(); ++i) {
      bound = std::max(bound, std::abs(u.lower()[i]));
      bound = std::max(bound, std::abs(u.upper()[i]));
    }
  }
  return bound;
}

double equicontinuity_modulus(const FamilySample& family, double delta) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("delta must lie in (0, 1]");
  const int k = family.grid.cells;
  const int max_gap = static_cast<int>(std::floor(delta * k + 1e-12));
  double omega = 0.0;
  for (const auto& u : family.members) {
    for (int gap = 1; gap <= max_gap; ++gap) {
      for (int i = 0; i + gap <= k; ++i) {
        omega = std::max(
            omega, interval_hausdorff(u.level(i), u.level(i + gap)));
      }
    }
  }
  return omega;
}

CompactnessReport compactness_verdict(const FamilySample& family,
                                      double bound_cap, double epsilon,
                                      double delta) {
  if (!(bound_cap > 0.0)) throw std::invalid_argument("bound cap must be > 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("delta must lie in (0, 1]");

  CompactnessReport report;
  report.bound_cap = bound_cap;
  report.epsilon = epsilon;
  report.delta = delta;
  report.bound = family_bound(family);
  report.modulus_at_delta = equicontinuity_modulus(family, delta);
  for (int k = 6; k >= 1; --k) {
    const double d = std::ldexp(1.0, -k);  // 1/64 ... 1/2
    report.modulus.emplace_back(d, equicontinuity_modulus(family, d));
  }
  report.bounded_verdict = report.bound <= bound_cap;
  report.equicontinuous_verdict = report.modulus_at_delta < epsilon;
  report.verdict = report.bounded_verdict && report.equicontinuous_verdict;
  return report;
}

}  // namespace fuzzband
