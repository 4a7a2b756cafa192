#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fuzzband/solver.hpp"
#include "fuzzband/verification.hpp"
#include "test_support.hpp"

using namespace fuzzband;

namespace {

ProblemSpec linear_problem(double a, double lambda, double u0_crisp, double r_cap,
                           int n = 128, int k = 16) {
  ProblemSpec spec;
  spec.a = a;
  spec.q = 0.5;
  spec.u0.constant = FuzzyValueSpec::crisp_value(u0_crisp);
  spec.rhs.kind = RhsKind::linear;
  spec.rhs.lambda = lambda;
  spec.ball_radius = r_cap;
  spec.alpha_cells = k;
  spec.time_cells = n;
  spec.tol = 1e-10;
  spec.max_iter = 64;
  return spec;
}

}  // namespace

TEST_CASE("initial data bound") {
  const AlphaGrid alpha(32);
  const TimeGrid grid = TimeGrid::uniform(1.0, 8);

  FuzzyTrajectory crisp_one(
      grid, std::vector<FuzzyNumber>(9, FuzzyNumber::crisp(alpha, 1.0)));
  CHECK(initial_bound(crisp_one) == 1.0);

  // Dense-alpha oracle: levels of triangular(0,1,2) are [a, 2-a], so
  // D(tri, 0) = 2 at alpha = 0.
  double oracle = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double a = i / 100000.0;
    oracle = std::max(oracle, std::max(a, 2.0 - a));
  }
  CHECK(oracle == doctest::Approx(2.0));
  const auto tri = FuzzyNumber::triangular(alpha, 0, 1, 2);
  FuzzyTrajectory tri_traj(grid, std::vector<FuzzyNumber>(9, tri));
  CHECK(initial_bound(tri_traj) == doctest::Approx(2.0).epsilon(1e-14));

  // u0(t) = t * triangular(0,1,2): the sup sits at t = 1.
  std::vector<FuzzyNumber> ramp;
  for (double t : grid.nodes) ramp.push_back(scale(t, tri));
  CHECK(initial_bound(FuzzyTrajectory(grid, std::move(ramp))) ==
        doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("rhs bound") {
  const AlphaGrid alpha(16);

  RhsSpec lin;
  lin.kind = RhsKind::linear;
  lin.lambda = 1.0;
  CHECK(rhs_bound(lin, 0.5, 1.0, 2.0, 64, 1.0, alpha).value == 2.0);
  lin.lambda = 0.0;
  CHECK(rhs_bound(lin, 0.5, 1.0, 5.0, 64, 1.0, alpha).value == 0.0);

  RhsSpec aff;
  aff.kind = RhsKind::affine;
  aff.c_const = 0.5;
  aff.g_const = FuzzyValueSpec::crisp_value(1.0);
  const RhsBound ab = rhs_bound(aff, 0.5, 1.0, 2.0, 64, 1.0, alpha);
  CHECK(ab.value == doctest::Approx(2.0).epsilon(1e-14));

  RhsSpec sing;
  sing.kind = RhsKind::singular_linear;
  sing.lambda = 1.0;
  sing.r = 0.25;
  const RhsBound sb = rhs_bound(sing, 0.5, 1.0, 2.0, 256, 8.0 / 3.0, alpha);
  const double t_min = std::pow(1.0 / 256, 8.0 / 3.0);
  CHECK(sb.value == doctest::Approx(2.0 * std::pow(t_min, -0.25)));
  CHECK(sb.method.find("estimated on [t_min, a]") != std::string::npos);
}

TEST_CASE("existence horizon") {
  // ((2 - 1) Gamma(1.5) / 1)^2 = pi / 4.
  const double pi = std::acos(-1.0);
  CHECK(existence_horizon(1.0, 0.5, 2.0, 1.0, 1.0) ==
        doctest::Approx(pi / 4).epsilon(1e-10));
  // Formula reach (10 Gamma(1.5))^2 ~ 78.5 exceeds a, so min picks a.
  CHECK(existence_horizon(0.1, 0.5, 10.0, 0.0, 1.0) == 0.1);
  CHECK(existence_horizon(1.0, 0.5, 2.0, 1.0, 0.0) == 1.0);

  CHECK_THROWS_AS(existence_horizon(1.0, 0.5, 1.0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(existence_horizon(1.0, 0.5, 0.5, 1.0, 1.0),
                  std::invalid_argument);

  // Monotone: nondecreasing in R, nonincreasing in M.
  double prev = 0.0;
  for (double r_cap = 1.5; r_cap <= 40.0; r_cap += 0.7) {
    const double eta = existence_horizon(1e9, 0.5, r_cap, 1.0, 1.0);
    CHECK(eta >= prev);
    prev = eta;
  }
  prev = 1e300;
  for (double m = 0.25; m <= 30.0; m *= 1.5) {
    const double eta = existence_horizon(1e9, 0.5, 2.0, 1.0, m);
    CHECK(eta <= prev);
    prev = eta;
  }
}

TEST_CASE("integral operator on constant trajectories") {
  ProblemSpec spec = linear_problem(0.25, 1.0, 1.0, 3.0, 64);
  PreparedProblem p = prepare(spec);
  CHECK(p.horizon == doctest::Approx(0.25));

  // u = 0: A u = 0.
  FuzzyTrajectory zeros(
      p.grid, std::vector<FuzzyNumber>(p.grid.nodes.size(),
                                       FuzzyNumber::crisp(p.alpha, 0.0)));
  OperatorImage a0 = apply_integral_operator(p, zeros);
  for (const auto& v : a0.value.values)
    CHECK(distance(v, FuzzyNumber::crisp(p.alpha, 0.0)) == 0.0);

  // u = 1, lambda = 1, q = 1/2: (A u)(t) = 2 sqrt(t) exactly (row sums).
  FuzzyTrajectory ones(
      p.grid, std::vector<FuzzyNumber>(p.grid.nodes.size(),
                                       FuzzyNumber::crisp(p.alpha, 1.0)));
  OperatorImage a1 = apply_integral_operator(p, ones);
  for (size_t m = 0; m < p.grid.nodes.size(); ++m) {
    CHECK(distance(a1.value.values[m],
                   FuzzyNumber::crisp(p.alpha,
                                      2.0 * std::sqrt(p.grid.nodes[m]))) <=
          1e-12);
  }

  // Triangular constant: levelwise the same constants appear.
  const auto tri = FuzzyNumber::triangular(p.alpha, 0, 1, 2);
  FuzzyTrajectory tris(
      p.grid, std::vector<FuzzyNumber>(p.grid.nodes.size(), tri));
  OperatorImage at = apply_integral_operator(p, tris);
  for (size_t m = 1; m < p.grid.nodes.size(); ++m) {
    const double mass = 2.0 * std::sqrt(p.grid.nodes[m]);
    CHECK(distance(at.value.values[m], scale(mass, tri)) <= 1e-12);
    CHECK(validate(at.value.values[m]).ok);
  }

  // Picard map on u = 0 with crisp u0 stays at u0; with u = u0 = 1 it is
  // 1 + 2 sqrt(t / pi).
  OperatorImage t0 = apply_picard_map(p, zeros);
  for (const auto& v : t0.value.values)
    CHECK(distance(v, FuzzyNumber::crisp(p.alpha, 1.0)) == 0.0);
  OperatorImage t1 = apply_picard_map(p, ones);
  const double pi = std::acos(-1.0);
  for (size_t m = 0; m < p.grid.nodes.size(); ++m) {
    const double expected = 1.0 + 2.0 * std::sqrt(p.grid.nodes[m] / pi);
    CHECK(distance(t1.value.values[m],
                   FuzzyNumber::crisp(p.alpha, expected)) <= 1e-12);
  }
}

TEST_CASE("picard: zero rhs converges immediately to u0") {
  ProblemSpec spec = linear_problem(0.5, 0.0, 1.0, 2.0, 32);
  SolveReport rep = picard_solve(spec);
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.iterations == 1);
  CHECK(rep.horizon == 0.5);
  for (const auto& v : rep.solution->values)
    CHECK(distance(v, FuzzyNumber::crisp(AlphaGrid(16), 1.0)) == 0.0);
}

TEST_CASE("picard reproduces the Mittag-Leffler solution") {
  ProblemSpec spec = linear_problem(0.25, 1.0, 1.0, 3.0, 256, 16);
  SolveReport rep = picard_solve(spec);
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.horizon == doctest::Approx(0.25));
  CHECK(rep.final_residual < 1e-9);
  CHECK(rep.windows == 1);

  // Crisp reduction: bands collapse and match c E_q(lambda t^q).
  const FuzzyTrajectory& u = *rep.solution;
  for (size_t m = 0; m < u.values.size(); ++m) {
    const FuzzyNumber& v = u.values[m];
    for (int i = 0; i <= v.grid().cells; ++i)
      CHECK(v.upper()[i] - v.lower()[i] <= 1e-10);
    const double ref = crisp_linear_solution(0.5, 1.0, 1.0, u.grid.nodes[m]);
    CHECK(std::abs(v.lower()[0] - ref) / ref < 5e-3);
  }
  // Checks recorded by the solve.
  CHECK(rep.checks.at("self_map").pass);
  CHECK(rep.checks.at("holder").pass);
  CHECK(rep.checks.at("level_equicontinuity").pass);
}

TEST_CASE("picard: fuzzy levelwise decoupling") {
  ProblemSpec spec = linear_problem(0.25, 1.0, 0.0, 3.0, 128, 8);
  spec.u0.constant = FuzzyValueSpec::triangular_value(0.9, 1.0, 1.1);
  SolveReport rep = picard_solve(spec);
  CHECK(rep.status == SolveStatus::converged);

  const FuzzyTrajectory& u = *rep.solution;
  const AlphaGrid& alpha = u.values.front().grid();
  const auto u0 = FuzzyNumber::triangular(alpha, 0.9, 1.0, 1.1);
  for (size_t m = 0; m < u.values.size(); ++m) {
    const double growth =
        mittag_leffler(0.5, std::sqrt(u.grid.nodes[m]));
    for (int i = 0; i <= alpha.cells; ++i) {
      CHECK(u.values[m].lower()[i] ==
            doctest::Approx(u0.lower()[i] * growth).epsilon(5e-3));
      CHECK(u.values[m].upper()[i] ==
            doctest::Approx(u0.upper()[i] * growth).epsilon(5e-3));
    }
  }
}

TEST_CASE("continuation by window splitting") {
  // max_iter too small for whole-horizon Picard; the window continuation
  // still reaches the fixed point and the answer matches the oracle.
  ProblemSpec spec = linear_problem(0.25, 1.0, 1.0, 3.0, 128, 8);
  spec.max_iter = 8;
  spec.tol = 1e-8;
  SolveReport rep = picard_solve(spec);
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.windows > 1);
  const double ref = crisp_linear_solution(0.5, 1.0, 1.0, 0.25);
  CHECK(rep.solution->values.back().lower()[0] ==
        doctest::Approx(ref).epsilon(5e-3));
}

TEST_CASE("picard: non-convergence is reported, not thrown") {
  ProblemSpec spec = linear_problem(0.25, 1.0, 1.0, 3.0, 16, 8);
  spec.max_iter = 1;
  spec.tol = 1e-15;
  SolveReport rep = picard_solve(spec);
  CHECK(rep.status == SolveStatus::non_converged);
  CHECK_FALSE(rep.residual_trace.empty());
  CHECK_FALSE(rep.warnings.empty());
}

TEST_CASE("problem validation") {
  ProblemSpec spec = linear_problem(1.0, 1.0, 1.0, 2.0);
  CHECK_NOTHROW(validate_problem(spec));

  ProblemSpec bad = spec;
  bad.q = 1.5;
  CHECK_THROWS_AS(validate_problem(bad), std::invalid_argument);
  bad = spec;
  bad.rhs.lambda = -1.0;
  CHECK_THROWS_AS(validate_problem(bad), std::invalid_argument);
  bad = spec;
  bad.rhs.kind = RhsKind::singular_linear;
  bad.rhs.r = 0.75;  // r >= q
  CHECK_THROWS_AS(validate_problem(bad), std::invalid_argument);
  bad = spec;
  bad.grading = 0.5;
  CHECK_THROWS_AS(validate_problem(bad), std::invalid_argument);

  // R <= N surfaces as a precondition failure naming both quantities.
  ProblemSpec small_r = linear_problem(1.0, 1.0, 1.0, 0.5);
  try {
    prepare(small_r);
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("R") != std::string::npos);
    CHECK(msg.find("N") != std::string::npos);
  }
}

TEST_CASE("holder continuity check") {
  ProblemSpec spec = linear_problem(0.25, 1.0, 1.0, 2.0, 64, 8);
  PreparedProblem p = prepare(spec);
  FuzzyTrajectory ones(
      p.grid, std::vector<FuzzyNumber>(p.grid.nodes.size(),
                                       FuzzyNumber::crisp(p.alpha, 1.0)));

  // Closed forms: lhs = (t2^q - t1^q)/q, bound = (2 lambda R / q) dt^q.
  CheckResult pair = check_holder_continuity(p, ones, 16, 48);
  CHECK(pair.pass);
  const double lhs = (std::sqrt(p.grid.nodes[48]) -
                      std::sqrt(p.grid.nodes[16])) / 0.5;
  const double bound = (2.0 * 2.0 / 0.5) *
                       std::sqrt(p.grid.nodes[48] - p.grid.nodes[16]);
  CHECK(pair.measured == doctest::Approx(lhs / bound).epsilon(1e-6));
  CHECK(pair.measured < 1.0);

  CheckResult same = check_holder_continuity(p, ones, 5, 5);
  CHECK(same.pass);
  CHECK(same.measured == 0.0);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u =
        fuzzband::testing::random_trajectory(rng, p.grid, p.alpha, 0.5, 0.05);
    for (auto [i, j] : {std::pair{0, 64}, {3, 19}, {10, 11}}) {
      CHECK(check_holder_continuity(p, u, i, j).pass);
    }
  }
  CHECK_THROWS_AS(check_holder_continuity(p, ones, 10, 5),
                  std::invalid_argument);
}

TEST_CASE("level equicontinuity of the operator image") {
  ProblemSpec spec = linear_problem(0.25, 1.0, 1.0, 3.0, 32, 16);
  PreparedProblem p = prepare(spec);

  // Crisp trajectories have constant level maps: modulus 0 on both sides.
  std::vector<FuzzyTrajectory> crisp_sample;
  crisp_sample.emplace_back(
      p.grid, std::vector<FuzzyNumber>(p.grid.nodes.size(),
                                       FuzzyNumber::crisp(p.alpha, 0.0)));
  crisp_sample.emplace_back(
      p.grid, std::vector<FuzzyNumber>(p.grid.nodes.size(),
                                       FuzzyNumber::crisp(p.alpha, 1.0)));
  CheckResult crisp_check =
      check_level_equicontinuity_of_image(p, crisp_sample, 1.0, 0.25);
  CHECK(crisp_check.pass);
  CHECK(crisp_check.measured == 0.0);

  // Triangular-valued trajectories: image modulus stays below the weighted
  // integrand modulus.
  std::vector<FuzzyTrajectory> tri_sample;
  for (double m : {0.5, 1.0, 1.5}) {
    tri_sample.emplace_back(
        p.grid,
        std::vector<FuzzyNumber>(
            p.grid.nodes.size(),
            FuzzyNumber::triangular(p.alpha, 0, m, 2 * m)));
  }
  CheckResult tri_check =
      check_level_equicontinuity_of_image(p, tri_sample, 1.0, 0.25);
  CHECK(tri_check.pass);
  CHECK(tri_check.measured <= 1.0 + 1e-12);
}

TEST_CASE("singular rhs solve") {
  ProblemSpec spec;
  spec.a = 1.0;
  spec.q = 0.5;
  spec.u0.constant = FuzzyValueSpec::crisp_value(1.0);
  spec.rhs.kind = RhsKind::singular_linear;
  spec.rhs.lambda = 1.0;
  spec.rhs.r = 0.25;
  spec.ball_radius = 2.0;
  spec.alpha_cells = 8;
  spec.time_cells = 64;
  spec.grading = 2.0 / (1.0 - 0.25);
  spec.tol = 1e-9;
  spec.max_iter = 64;

  SolveReport rep = picard_solve(spec);
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.final_residual < 1e-7);
  CHECK(rep.checks.at("self_map").pass);
  CHECK(rep.rhs_bound_method.find("estimated") != std::string::npos);

  // Refinement on the pinned horizon: value at eta moves by under 2%.
  ProblemSpec fine = spec;
  fine.time_cells = 128;
  SolveReport rep2 = solve_prepared(prepare_on_horizon(fine, rep.horizon));
  CHECK(rep2.status == SolveStatus::converged);
  const double coarse_val = rep.solution->values.back().lower()[0];
  const double fine_val = rep2.solution->values.back().lower()[0];
  CHECK(std::abs(coarse_val - fine_val) / std::abs(fine_val) < 0.02);
}

TEST_CASE("self-map violation is detected for an underestimated rhs bound") {
  // Uniform coarse estimation grid + strong singular coefficient: the
  // caveat-tagged M misses the sup near t = 0 and the iterates leave the
  // ball.
  ProblemSpec spec;
  spec.a = 1.0;
  spec.q = 0.5;
  spec.u0.constant = FuzzyValueSpec::crisp_value(1.0);
  spec.rhs.kind = RhsKind::singular_linear;
  spec.rhs.lambda = 100.0;
  spec.rhs.r = 0.25;
  spec.ball_radius = 2.0;
  spec.alpha_cells = 8;
  spec.time_cells = 4;
  spec.grading = 1.0;
  spec.tol = 1e-10;
  spec.max_iter = 3;

  SolveReport rep = picard_solve(spec);
  CHECK_FALSE(rep.checks.at("self_map").pass);
  CHECK(rep.checks.at("self_map").measured > spec.ball_radius);
}

TEST_CASE("affine rhs with forcing") {
  ProblemSpec spec;
  spec.a = 0.25;
  spec.q = 0.5;
  spec.u0.constant = FuzzyValueSpec::crisp_value(0.0);
  spec.rhs.kind = RhsKind::affine;
  spec.rhs.c_const = 0.0;
  spec.rhs.g_const = FuzzyValueSpec::crisp_value(1.0);
  spec.ball_radius = 3.0;
  spec.alpha_cells = 8;
  spec.time_cells = 64;
  spec.tol = 1e-12;
  spec.max_iter = 16;

  // With c = 0 the equation is explicit: u(t) = (1/Gamma(q)) int (t-s)^{q-1}
  // g ds = 2 sqrt(t) / Gamma(1/2).
  SolveReport rep = picard_solve(spec);
  CHECK(rep.status == SolveStatus::converged);
  const double pi = std::acos(-1.0);
  for (size_t m = 0; m < rep.solution->values.size(); ++m) {
    const double expected =
        2.0 * std::sqrt(rep.solution->grid.nodes[m] / pi);
    CHECK(rep.solution->values[m].lower()[0] ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("tabulated initial data and affine tables") {
  // u0 given per node of the reference grid; zero rhs keeps the solution
  // equal to the restricted initial data.
  ProblemSpec spec;
  spec.a = 0.5;
  spec.q = 0.5;
  spec.u0.is_table = true;
  const int n = 8;
  for (int j = 0; j <= n; ++j) {
    const double t = 0.5 * j / n;
    spec.u0.table.push_back(FuzzyValueSpec::crisp_value(1.0 + t));
  }
  spec.rhs.kind = RhsKind::linear;
  spec.rhs.lambda = 0.0;
  spec.ball_radius = 2.0;
  spec.alpha_cells = 4;
  spec.time_cells = n;
  spec.tol = 1e-12;
  spec.max_iter = 4;

  SolveReport rep = picard_solve(spec);
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.initial_bound == doctest::Approx(1.5));
  CHECK(rep.horizon == 0.5);  // M = 0 keeps the whole interval
  for (size_t m = 0; m < rep.solution->values.size(); ++m) {
    const double expected = 1.0 + rep.solution->grid.nodes[m];
    CHECK(rep.solution->values[m].lower()[0] ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  // Affine with tabulated coefficient and forcing: M is the max-based
  // upper bound.
  ProblemSpec aff;
  aff.a = 0.25;
  aff.q = 0.5;
  aff.u0.constant = FuzzyValueSpec::crisp_value(1.0);
  aff.rhs.kind = RhsKind::affine;
  aff.rhs.c_is_table = true;
  aff.rhs.g_is_table = true;
  for (int j = 0; j <= 16; ++j) {
    aff.rhs.c_table.push_back(0.25 + 0.25 * j / 16.0);
    aff.rhs.g_table.push_back(
        FuzzyValueSpec::triangular_value(0.0, 0.5 + 0.5 * j / 16.0, 2.0));
  }
  aff.ball_radius = 4.0;
  aff.alpha_cells = 8;
  aff.time_cells = 16;
  aff.tol = 1e-10;
  aff.max_iter = 32;

  PreparedProblem p = prepare(aff);
  CHECK(p.rhs_bound_value.value == doctest::Approx(0.5 * 4.0 + 2.0));
  SolveReport arep = solve_prepared(p);
  CHECK(arep.status == SolveStatus::converged);
  CHECK(arep.checks.at("self_map").pass);
}
