#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fuzzband/quadrature.hpp"

namespace fuzzband {

enum class RhsKind { linear, affine, singular_linear };

// Constant-or-band fuzzy value used by problem descriptions.
struct FuzzyValueSpec {
  enum class Kind { crisp, triangular, band } kind = Kind::crisp;
  double c = 0.0;
  double l = 0.0, m = 0.0, r = 0.0;
  std::vector<double> lower, upper;

  static FuzzyValueSpec crisp_value(double c);
  static FuzzyValueSpec triangular_value(double l, double m, double r);
  static FuzzyValueSpec band_value(std::vector<double> lower,
                                   std::vector<double> upper);
  FuzzyNumber build(const AlphaGrid& grid) const;
};

// Initial data: either one value held constant in t, or one value per node
// of the reference grid on [0, a].
struct U0Spec {
  bool is_table = false;
  FuzzyValueSpec constant;
  std::vector<FuzzyValueSpec> table;
};

// Right-hand side f(t, u) of the integral equation.  Coefficients are kept
// nonnegative so the levelwise evaluation stays inside the fuzzy cone:
//   linear:          f(t, u) = lambda * u
//   affine:          f(t, u) = c(t) * u + g(t)
//   singular_linear: f(t, u) = lambda * t^{-r} * u          (0 < r < q)
struct RhsSpec {
  RhsKind kind = RhsKind::linear;
  double lambda = 0.0;
  double r = 0.0;
  bool c_is_table = false;
  double c_const = 0.0;
  std::vector<double> c_table;
  bool g_is_table = false;
  FuzzyValueSpec g_const;
  std::vector<FuzzyValueSpec> g_table;
};

struct ProblemSpec {
  double a = 1.0;           // data horizon, t in [0, a]
  double q = 0.5;           // kernel exponent, (t-s)^{q-1}
  U0Spec u0;
  RhsSpec rhs;
  double ball_radius = 0.0; // R; must exceed the initial data bound
  int alpha_cells = 32;     // K
  int time_cells = 256;     // n
  double grading = 1.0;     // gamma; mesh t_j = eta (j/n)^gamma
  double tol = 1e-10;
  int max_iter = 64;
};

// Throws std::invalid_argument describing the first violated requirement.
void validate_problem(const ProblemSpec& spec);

// Sup over the data horizon of D(u0(t), 0).
double initial_bound(const FuzzyTrajectory& u0);

struct RhsBound {
  double value = 0.0;
  std::string method;
};

// Upper bound for sup D(f(t, x), 0) over t in (0, a], D(x, 0) <= R.  Exact
// for the linear kind; an upper bound for affine; for the singular kind the
// sup over (0, a] is infinite and the value is estimated on [t_min, a] with
// t_min the first node of the reference grid (the method string carries the
// caveat).
RhsBound rhs_bound(const RhsSpec& rhs, double q, double a, double ball_radius,
                   int time_cells, double grading, const AlphaGrid& alpha);

// min{ a, [ (R - N) Gamma(q+1) / M ]^{1/q} }; the horizon on which the
// fixed-point map keeps the radius-R ball invariant.  M = 0 yields a.
double existence_horizon(double a, double q, double ball_radius,
                         double initial_bound, double rhs_bound);

// A problem resolved onto concrete grids, ready for operator application.
struct PreparedProblem {
  ProblemSpec spec;
  AlphaGrid alpha;
  TimeGrid grid;                  // solve grid on [0, horizon]
  std::vector<FuzzyNumber> u0;    // initial data on the solve grid
  std::vector<double> c;          // affine coefficient at solve nodes
  std::vector<FuzzyNumber> g;     // affine forcing at solve nodes
  std::optional<KernelWeights> weights;
  std::optional<SingularKernelWeights> singular_weights;
  double initial_bound_value = 0.0;  // N
  RhsBound rhs_bound_value;          // M
  double horizon = 0.0;              // eta
  double gamma_q = 0.0;              // Gamma(q)

  PreparedProblem(const ProblemSpec& s, AlphaGrid a, TimeGrid g)
      : spec(s), alpha(a), grid(std::move(g)) {}
};

PreparedProblem prepare(const ProblemSpec& spec);
// Same, but with the horizon pinned externally (grid-refinement studies).
PreparedProblem prepare_on_horizon(const ProblemSpec& spec, double horizon);

// f(t_j, u) at a solve-grid node; node 0 of the singular kind is handled
// inside the integral operator and must not be requested here.
FuzzyNumber rhs_value(const PreparedProblem& p, int node,
                      const FuzzyNumber& u);

struct OperatorImage {
  FuzzyTrajectory value;
  bool input_left_ball = false;  // some input node had D(u, 0) > R + 1e-8
};

// The weakly singular integral operator: node m receives the product-
// integration of s -> f(s, u(s)) over [0, t_m]; node 0 is the null set.
OperatorImage apply_integral_operator(const PreparedProblem& p,
                                      const FuzzyTrajectory& u);

// Fixed-point map: u0(t) + (1/Gamma(q)) * integral operator.
OperatorImage apply_picard_map(const PreparedProblem& p,
                               const FuzzyTrajectory& u);

struct CheckResult {
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string note;
};

// Uniform-continuity estimate for the operator image: verifies
//   D(Au(t_i), Au(t_j)) <= (2 M / q) (t_j - t_i)^q + 1e-8
// for one node pair.
CheckResult check_holder_continuity(const PreparedProblem& p,
                                    const FuzzyTrajectory& u, int node_lo,
                                    int node_hi);

// Level-equicontinuity transfer: at every node, the modulus of the image
// family {Au(t)} is bounded by the modulus of the integrand family scaled by
// the weight-row mass (t^q/q for the plain kernel).
CheckResult check_level_equicontinuity_of_image(
    const PreparedProblem& p, const std::vector<FuzzyTrajectory>& sample,
    double epsilon, double delta);

enum class SolveStatus { converged, non_converged };

struct SolveReport {
  SolveStatus status = SolveStatus::non_converged;
  double initial_bound = 0.0;      // N
  double rhs_bound = 0.0;          // M
  std::string rhs_bound_method;
  double horizon = 0.0;            // eta
  int iterations = 0;
  int windows = 1;                 // sub-horizons used by the continuation
  std::vector<double> residual_trace;
  double final_residual = 0.0;
  std::map<std::string, CheckResult> checks;
  std::vector<std::string> warnings;
  std::optional<FuzzyTrajectory> solution;
};

// Picard iteration u^{k+1} = u0 + (1/Gamma(q)) A u^k starting from u0.  If
// the whole-horizon iteration misses `tol` within `max_iter` sweeps, the
// horizon is split into sequential sub-windows (doubling their number) and
// the iteration continues window by window, exploiting that the operator
// only looks backward in time.
SolveReport picard_solve(const ProblemSpec& spec);
SolveReport solve_prepared(const PreparedProblem& p);

}  // namespace fuzzband
