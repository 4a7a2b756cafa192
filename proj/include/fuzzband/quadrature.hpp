#pragma once

#include <vector>

#include "fuzzband/fuzzy_number.hpp"

namespace fuzzband {

// Time discretization 0 = t_0 < t_1 < ... < t_n = eta.  grading > 1 clusters
// nodes toward t = 0 via t_j = eta * (j/n)^grading.
struct TimeGrid {
  std::vector<double> nodes;
  double grading = 1.0;

  static TimeGrid uniform(double eta, int n);
  static TimeGrid graded(double eta, int n, double grading);
  // Validates an explicit node list (strictly increasing, starts at 0).
  explicit TimeGrid(std::vector<double> nodes_, double grading_ = 1.0);

  int cells() const { return static_cast<int>(nodes.size()) - 1; }
  double horizon() const { return nodes.back(); }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

// Euler gamma function for positive arguments; relative error <= 1e-12 on
// [0.1, 30] (the contract the solver relies on).
double gamma_fn(double x);

double beta_fn(double x, double y);

// Product-trapezoidal weights for the Abel kernel: row n holds w[n][j] with
//   integral_0^{t_n} (t_n - s)^{q-1} g(s) ds = sum_j w[n][j] g(t_j)
// exactly for every g that is piecewise linear on the grid.  The kernel is
// integrated in closed form against the hat basis, so all weights are
// nonnegative and each row sums to t_n^q / q.
struct KernelWeights {
  double q = 0.0;
  TimeGrid grid;
  // rows[n-1] has n+1 entries for nodes 0..n.
  std::vector<std::vector<double>> rows;

  std::span<const double> row(int n) const { return rows[n - 1]; }
};

KernelWeights product_trapezoid_weights(double q, const TimeGrid& grid);

// A time-indexed family of fuzzy numbers on a shared alpha grid.
struct FuzzyTrajectory {
  TimeGrid grid;
  std::vector<FuzzyNumber> values;

  FuzzyTrajectory(TimeGrid grid_, std::vector<FuzzyNumber> values_);
};

// Sup-over-time distance between trajectories on the same grid.
double trajectory_distance(const FuzzyTrajectory& f, const FuzzyTrajectory& g);

// Piecewise-linear interpolation of the trajectory in t (a convex nodal
// combination, so validity is preserved).
FuzzyNumber sample_trajectory(const FuzzyTrajectory& f, double t);

// Levelwise integral of F against kernel row `upto`: each endpoint function
// is integrated separately; nonnegative weights preserve the band invariants.
// Validates every member of F first.
FuzzyNumber fuzzy_integral(const FuzzyTrajectory& f, int upto,
                           const KernelWeights& weights);

// Same accumulation without re-validating members (callers that already
// guarantee validity, e.g. the solver loop).
FuzzyNumber fuzzy_integral_unchecked(const FuzzyTrajectory& f, int upto,
                                     const KernelWeights& weights);

// Checks D(int F, int G) <= sum_j w_j D(F_j, G_j) + 1e-10 for one row.
struct IntegralBoundCheck {
  bool ok = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

IntegralBoundCheck integral_metric_bound_check(const FuzzyTrajectory& f,
                                               const FuzzyTrajectory& g,
                                               const KernelWeights& weights,
                                               int upto);

// Weights for the doubly weighted kernel (t_n - s)^{q-1} s^{-r} applied to
// the smooth factor w(s) of an integrand s^{-r} w(s):
//   integral_0^{t_n} (t_n - s)^{q-1} s^{-r} w(s) ds ~= sum_j c[n][j] w(t_j).
// Cells away from the origin use the product-trapezoidal kernel weights
// multiplied by the nodal factor t_j^{-r}; the first cell [0, t_1] is
// integrated against linear interpolation of w with both singular factors
// kept inside the moment integrals (closed Beta form on the diagonal,
// dyadic Gauss panels otherwise).  All coefficients are nonnegative.
struct SingularKernelWeights {
  double q = 0.0;
  double r = 0.0;
  TimeGrid grid;
  std::vector<std::vector<double>> rows;  // rows[n-1] has n+1 entries

  std::span<const double> row(int n) const { return rows[n - 1]; }
};

SingularKernelWeights singular_product_weights(double q, double r,
                                               const TimeGrid& grid);

// Levelwise integral of the smooth factor against a singular weight row.
FuzzyNumber weakly_singular_integral(const FuzzyTrajectory& smooth, int upto,
                                     const SingularKernelWeights& weights);

}  // namespace fuzzband
