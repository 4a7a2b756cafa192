#include "fuzzband/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "fuzzband/interval.hpp"
#include "fuzzband/quadrature.hpp"

namespace fuzzband {

double mittag_leffler(double q, double z) {
  if (!(q > 0.0 && q <= 1.0))
    throw std::domain_error("mittag_leffler requires 0 < q <= 1");
  if (!(std::abs(z) <= 3.0))
    throw std::domain_error("mittag_leffler argument outside supported range");
  if (z == 0.0) return 1.0;
  const double log_abs_z = std::log(std::abs(z));
  double sum = 1.0;  // k = 0 term
  for (int k = 1; k <= 200; ++k) {
    double term = std::exp(k * log_abs_z - std::lgamma(q * k + 1.0));
    if (z < 0.0 && (k % 2) == 1) term = -term;
    sum += term;
    if (std::abs(term) < 1e-16) break;
  }
  return sum;
}

double crisp_linear_solution(double q, double lambda, double c, double t) {
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be nonnegative");
  if (!(t >= 0.0)) throw std::domain_error("t must be nonnegative");
  return c * mittag_leffler(q, lambda * std::pow(t, q));
}

double brute_force_hausdorff(std::span<const double> a,
                             std::span<const double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("point samples must be nonempty");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  auto directed = [](const std::vector<double>& from,
                     const std::vector<double>& to) {
    double sup = 0.0;
    for (double x : from) {
      auto it = std::lower_bound(to.begin(), to.end(), x);
      double best = std::numeric_limits<double>::infinity();
      if (it != to.end()) best = *it - x;
      if (it != to.begin()) best = std::min(best, x - *(it - 1));
      sup = std::max(sup, best);
    }
    return sup;
  };
  return std::max(directed(sa, sb), directed(sb, sa));
}

std::vector<double> sample_interval(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo))
    throw std::invalid_argument("bad sampling parameters");
  std::vector<double> out;
  for (double x = lo; x < hi; x += step) out.push_back(x);
  out.push_back(hi);
  return out;
}

OracleResult make_oracle_result(std::string name, double computed,
                                double reference, double tolerance) {
  OracleResult r;
  r.name = std::move(name);
  r.computed = computed;
  r.reference = reference;
  r.tolerance = tolerance;
  r.abs_err = std::abs(computed - reference);
  r.rel_err = reference == 0.0
                  ? (computed == 0.0 ? 0.0
                                     : std::numeric_limits<double>::infinity())
                  : r.abs_err / std::abs(reference);
  r.pass = r.abs_err <= tolerance || r.rel_err <= tolerance;
  return r;
}

std::vector<OracleResult> oracle_suite(double gamma_tolerance) {
  std::vector<OracleResult> out;
  const double sqrt_pi = std::sqrt(std::acos(-1.0));

  out.push_back(make_oracle_result("gamma(1.5) = sqrt(pi)/2", gamma_fn(1.5),
                                   0.5 * sqrt_pi, gamma_tolerance));
  out.push_back(
      make_oracle_result("gamma(1) = 1", gamma_fn(1.0), 1.0, gamma_tolerance));
  out.push_back(make_oracle_result("gamma(5) = 24", gamma_fn(5.0), 24.0,
                                   gamma_tolerance));
  out.push_back(make_oracle_result("gamma(0.5) = sqrt(pi)", gamma_fn(0.5),
                                   sqrt_pi, gamma_tolerance));

  out.push_back(make_oracle_result("E_1(1) = e", mittag_leffler(1.0, 1.0),
                                   std::exp(1.0), 1e-12));
  out.push_back(make_oracle_result("E_1(-1) = 1/e", mittag_leffler(1.0, -1.0),
                                   std::exp(-1.0), 1e-12));
  out.push_back(make_oracle_result("E_q(0) = 1", mittag_leffler(0.5, 0.0), 1.0,
                                   1e-15));

  // Two independent evaluation routes for E_{1/2} on [0, 1.5].
  double worst = 0.0;
  for (double z = 0.0; z <= 1.5 + 1e-9; z += 0.125) {
    const double series = mittag_leffler(0.5, z);
    const double closed = std::exp(z * z) * (1.0 + std::erf(z));
    worst = std::max(worst, std::abs(series - closed) / closed);
  }
  out.push_back(make_oracle_result(
      "E_1/2 series vs erf identity on [0,1.5] (max rel diff)", worst, 0.0,
      1e-10));

  // Kernel weight identities.
  {
    TimeGrid grid = TimeGrid::uniform(0.25, 64);
    KernelWeights w = product_trapezoid_weights(0.5, grid);
    double row_sum = 0.0;
    for (double wj : w.row(64)) row_sum += wj;
    out.push_back(make_oracle_result("kernel row sum t^q/q (q=0.5, t=0.25)",
                                     row_sum, 1.0, 1e-12));
  }
  {
    TimeGrid grid = TimeGrid::uniform(1.0, 256);
    KernelWeights w = product_trapezoid_weights(0.5, grid);
    double applied = 0.0;
    const auto row = w.row(256);
    for (size_t j = 0; j < row.size(); ++j) applied += row[j] * grid.nodes[j];
    out.push_back(make_oracle_result(
        "Beta moment: int (1-s)^{-1/2} s ds = 4/3", applied, 4.0 / 3.0,
        1e-12));
  }

  // Brute-force Hausdorff vs the interval endpoint formula.
  {
    const double step = 1e-3;
    const double brute = brute_force_hausdorff(
        sample_interval(1.0, 3.0, step), sample_interval(2.0, 5.0, step));
    out.push_back(make_oracle_result("brute Hausdorff([1,3],[2,5]) = 2", brute,
                                     2.0, 2.0 * step));

    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> pick(-5.0, 5.0);
    double worst_gap = 0.0;
    for (int i = 0; i < 100; ++i) {
      double a1 = pick(rng), a2 = pick(rng);
      double b1 = pick(rng), b2 = pick(rng);
      Interval ia{std::min(a1, a2), std::max(a1, a2)};
      Interval ib{std::min(b1, b2), std::max(b1, b2)};
      const double brute_d = brute_force_hausdorff(
          sample_interval(ia.lo, ia.hi, step),
          sample_interval(ib.lo, ib.hi, step));
      worst_gap =
          std::max(worst_gap, std::abs(brute_d - interval_hausdorff(ia, ib)));
    }
    out.push_back(make_oracle_result(
        "brute vs endpoint Hausdorff, 100 random pairs (max gap)", worst_gap,
        0.0, 2.0 * step));
  }

  return out;
}

}  // namespace fuzzband
