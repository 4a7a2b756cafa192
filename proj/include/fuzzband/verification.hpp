#pragma once

#include <span>
#include <string>
#include <vector>

namespace fuzzband {

// Mittag-Leffler function E_q(z) = sum_k z^k / Gamma(q k + 1), summed with
// term-magnitude stopping at 1e-16 (at most 200 terms).  Supported for
// 0 < q <= 1 and |z| <= 3; for q = 1/2 the series is cross-checked in the
// oracle suite against E_{1/2}(z) = e^{z^2} (1 + erf z).
double mittag_leffler(double q, double z);

// Classical solution u(t) = c * E_q(lambda t^q) of the scalar linear
// fractional Volterra equation; reference for crisp solver runs.
double crisp_linear_solution(double q, double lambda, double c, double t);

// Hausdorff distance between two point samples, evaluating the sup-inf
// definition literally.  Used to validate the interval formula within
// sampling resolution.
double brute_force_hausdorff(std::span<const double> a,
                             std::span<const double> b);

// Evenly spaced samples of [lo, hi] with the given step (endpoints included).
std::vector<double> sample_interval(double lo, double hi, double step);

struct OracleResult {
  std::string name;
  double computed = 0.0;
  double reference = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tolerance = 0.0;
  bool pass = false;  // abs_err <= tolerance or rel_err <= tolerance
};

OracleResult make_oracle_result(std::string name, double computed,
                                double reference, double tolerance);

// The full oracle suite behind the `verify` command.  `gamma_tolerance`
// overrides the tolerance of the gamma-function oracles (a test hook for
// forcing the failure path).
std::vector<OracleResult> oracle_suite(double gamma_tolerance = 1e-12);

}  // namespace fuzzband
