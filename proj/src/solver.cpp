#include "fuzzband/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fuzzband/analysis.hpp"

namespace fuzzband {

FuzzyValueSpec FuzzyValueSpec::crisp_value(double c) {
  FuzzyValueSpec v;
  v.kind = Kind::crisp;
  v.c = c;
  return v;
}

FuzzyValueSpec FuzzyValueSpec::triangular_value(double l, double m, double r) {
  FuzzyValueSpec v;
  v.kind = Kind::triangular;
  v.l = l;
  v.m = m;
  v.r = r;
  return v;
}

FuzzyValueSpec FuzzyValueSpec::band_value(std::vector<double> lower,
                                          std::vector<double> upper) {
  FuzzyValueSpec v;
  v.kind = Kind::band;
  v.lower = std::move(lower);
  v.upper = std::move(upper);
  return v;
}

FuzzyNumber FuzzyValueSpec::build(const AlphaGrid& grid) const {
  switch (kind) {
    case Kind::crisp:
      return FuzzyNumber::crisp(grid, c);
    case Kind::triangular:
      return FuzzyNumber::triangular(grid, l, m, r);
    case Kind::band:
      return FuzzyNumber(grid, lower, upper);
  }
  throw std::logic_error("unreachable fuzzy value kind");
}

void validate_problem(const ProblemSpec& spec) {
  if (!(spec.a > 0.0) || !std::isfinite(spec.a))
    throw std::invalid_argument("data horizon a must be positive and finite");
  if (!(spec.q > 0.0 && spec.q < 1.0))
    throw std::invalid_argument("kernel exponent q must lie in (0, 1)");
  if (!(spec.ball_radius > 0.0))
    throw std::invalid_argument("ball radius R must be positive");
  if (spec.alpha_cells < 2)
    throw std::invalid_argument("alpha cell count K must be >= 2");
  if (spec.time_cells < 2)
    throw std::invalid_argument("time cell count n must be >= 2");
  if (!(spec.grading >= 1.0))
    throw std::invalid_argument("mesh grading gamma must be >= 1");
  if (!(spec.tol > 0.0))
    throw std::invalid_argument("tolerance must be positive");
  if (spec.max_iter < 1)
    throw std::invalid_argument("max_iter must be >= 1");
  if (spec.u0.is_table &&
      spec.u0.table.size() != static_cast<size_t>(spec.time_cells) + 1)
    throw std::invalid_argument("u0 table needs one value per grid node");

  const RhsSpec& rhs = spec.rhs;
  switch (rhs.kind) {
    case RhsKind::linear:
      if (!(rhs.lambda >= 0.0))
        throw std::invalid_argument("linear rhs needs lambda >= 0");
      break;
    case RhsKind::affine: {
      if (rhs.c_is_table) {
        if (rhs.c_table.size() != static_cast<size_t>(spec.time_cells) + 1)
          throw std::invalid_argument(
              "affine coefficient table needs one value per grid node");
        for (double cv : rhs.c_table)
          if (!(cv >= 0.0))
            throw std::invalid_argument("affine coefficient must be >= 0");
      } else if (!(rhs.c_const >= 0.0)) {
        throw std::invalid_argument("affine coefficient must be >= 0");
      }
      if (rhs.g_is_table &&
          rhs.g_table.size() != static_cast<size_t>(spec.time_cells) + 1)
        throw std::invalid_argument(
            "affine forcing table needs one value per grid node");
      break;
    }
    case RhsKind::singular_linear:
      if (!(rhs.lambda >= 0.0))
        throw std::invalid_argument("singular rhs needs lambda >= 0");
      if (!(rhs.r > 0.0 && rhs.r < spec.q))
        throw std::invalid_argument(
            "singular exponent r must lie in (0, q)");
      break;
  }
}

double initial_bound(const FuzzyTrajectory& u0) {
  const FuzzyNumber zero =
      FuzzyNumber::crisp(u0.values.front().grid(), 0.0);
  double n = 0.0;
  for (const auto& v : u0.values) n = std::max(n, distance(v, zero));
  return n;
}

RhsBound rhs_bound(const RhsSpec& rhs, double /*q*/, double a,
                   double ball_radius, int time_cells, double grading,
                   const AlphaGrid& alpha) {
  RhsBound out;
  const FuzzyNumber zero = FuzzyNumber::crisp(alpha, 0.0);
  switch (rhs.kind) {
    case RhsKind::linear:
      out.value = rhs.lambda * ball_radius;
      out.method = "exact: lambda * R";
      break;
    case RhsKind::affine: {
      double c_max = rhs.c_const;
      if (rhs.c_is_table)
        c_max = *std::max_element(rhs.c_table.begin(), rhs.c_table.end());
      double g_max = 0.0;
      if (rhs.g_is_table) {
        for (const auto& gv : rhs.g_table)
          g_max = std::max(g_max, distance(gv.build(alpha), zero));
      } else {
        g_max = distance(rhs.g_const.build(alpha), zero);
      }
      out.value = c_max * ball_radius + g_max;
      out.method = "upper bound: max_t c(t) * R + max_t D(g(t), 0)";
      break;
    }
    case RhsKind::singular_linear: {
      const double t_min = a * std::pow(1.0 / time_cells, grading);
      out.value = rhs.lambda * std::pow(t_min, -rhs.r) * ball_radius;
      char buf[96];
      std::snprintf(buf, sizeof buf,
                    "sup over (0,a] estimated on [t_min, a], t_min = %.6g",
                    t_min);
      out.method = buf;
      break;
    }
  }
  return out;
}

double existence_horizon(double a, double q, double ball_radius,
                         double initial_bound, double rhs_bound) {
  if (!(a > 0.0)) throw std::invalid_argument("horizon base a must be > 0");
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("kernel exponent q must lie in (0, 1)");
  if (!(rhs_bound >= 0.0))
    throw std::invalid_argument("rhs bound M must be >= 0");
  if (!(ball_radius > initial_bound)) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "ball radius R = %.6g must exceed the initial data bound "
                  "N = %.6g",
                  ball_radius, initial_bound);
    throw std::invalid_argument(buf);
  }
  if (rhs_bound == 0.0) return a;
  const double reach = std::pow(
      (ball_radius - initial_bound) * gamma_fn(q + 1.0) / rhs_bound, 1.0 / q);
  return std::min(a, reach);
}

namespace {

std::vector<FuzzyNumber> build_on_grid(const U0Spec& u0, const AlphaGrid& alpha,
                                       const TimeGrid& ref) {
  std::vector<FuzzyNumber> vals;
  vals.reserve(ref.nodes.size());
  if (u0.is_table) {
    for (const auto& v : u0.table) vals.push_back(v.build(alpha));
  } else {
    const FuzzyNumber v = u0.constant.build(alpha);
    vals.assign(ref.nodes.size(), v);
  }
  return vals;
}

double interp_scalar(const TimeGrid& ref, const std::vector<double>& table,
                     double t) {
  const auto& nodes = ref.nodes;
  size_t j = 1;
  while (j + 1 < nodes.size() && nodes[j] < t) ++j;
  const double theta = (t - nodes[j - 1]) / (nodes[j] - nodes[j - 1]);
  return table[j - 1] + theta * (table[j] - table[j - 1]);
}

PreparedProblem make_prepared(const ProblemSpec& spec,
                              std::optional<double> pinned_horizon) {
  validate_problem(spec);
  const AlphaGrid alpha(spec.alpha_cells);
  const TimeGrid ref = TimeGrid::graded(spec.a, spec.time_cells, spec.grading);

  FuzzyTrajectory u0_ref(ref, build_on_grid(spec.u0, alpha, ref));
  const double n_bound = initial_bound(u0_ref);
  const RhsBound m_bound = rhs_bound(spec.rhs, spec.q, spec.a,
                                     spec.ball_radius, spec.time_cells,
                                     spec.grading, alpha);
  double eta;
  if (pinned_horizon) {
    eta = *pinned_horizon;
    // R > N still required; existence_horizon performs that check.
    (void)existence_horizon(spec.a, spec.q, spec.ball_radius, n_bound,
                            m_bound.value);
    if (!(eta > 0.0 && eta <= spec.a))
      throw std::invalid_argument("pinned horizon must lie in (0, a]");
  } else {
    eta = existence_horizon(spec.a, spec.q, spec.ball_radius, n_bound,
                            m_bound.value);
  }

  PreparedProblem p(spec, alpha,
                    TimeGrid::graded(eta, spec.time_cells, spec.grading));
  p.initial_bound_value = n_bound;
  p.rhs_bound_value = m_bound;
  p.horizon = eta;
  p.gamma_q = gamma_fn(spec.q);

  p.u0.reserve(p.grid.nodes.size());
  if (spec.u0.is_table) {
    for (double t : p.grid.nodes) p.u0.push_back(sample_trajectory(u0_ref, t));
  } else {
    p.u0.assign(p.grid.nodes.size(), u0_ref.values.front());
  }

  if (spec.rhs.kind == RhsKind::affine) {
    p.c.reserve(p.grid.nodes.size());
    for (double t : p.grid.nodes) {
      p.c.push_back(spec.rhs.c_is_table
                        ? interp_scalar(ref, spec.rhs.c_table, t)
                        : spec.rhs.c_const);
    }
    if (spec.rhs.g_is_table) {
      std::vector<FuzzyNumber> g_ref;
      g_ref.reserve(ref.nodes.size());
      for (const auto& gv : spec.rhs.g_table) g_ref.push_back(gv.build(alpha));
      FuzzyTrajectory g_traj(ref, std::move(g_ref));
      for (double t : p.grid.nodes) p.g.push_back(sample_trajectory(g_traj, t));
    } else {
      p.g.assign(p.grid.nodes.size(), spec.rhs.g_const.build(alpha));
    }
  }

  if (spec.rhs.kind == RhsKind::singular_linear) {
    p.singular_weights = singular_product_weights(spec.q, spec.rhs.r, p.grid);
  } else {
    p.weights = product_trapezoid_weights(spec.q, p.grid);
  }
  return p;
}

}  // namespace

PreparedProblem prepare(const ProblemSpec& spec) {
  return make_prepared(spec, std::nullopt);
}

PreparedProblem prepare_on_horizon(const ProblemSpec& spec, double horizon) {
  return make_prepared(spec, horizon);
}

FuzzyNumber rhs_value(const PreparedProblem& p, int node,
                      const FuzzyNumber& u) {
  switch (p.spec.rhs.kind) {
    case RhsKind::linear:
      return scale(p.spec.rhs.lambda, u);
    case RhsKind::affine:
      return add(scale(p.c[node], u), p.g[node]);
    case RhsKind::singular_linear:
      if (node == 0)
        throw std::logic_error(
            "singular rhs is undefined at t = 0; handled by the first-cell "
            "moments");
      return scale(p.spec.rhs.lambda * std::pow(p.grid.nodes[node],
                                                -p.spec.rhs.r),
                   u);
  }
  throw std::logic_error("unreachable rhs kind");
}

namespace {

struct RangeImage {
  std::vector<FuzzyNumber> a_vals;  // operator image at nodes 0..hi
  std::vector<FuzzyNumber> t_vals;  // fixed-point map at nodes lo..hi
  bool left_ball = false;
};

RangeImage apply_range(const PreparedProblem& p,
                       const std::vector<FuzzyNumber>& u, int lo, int hi) {
  const FuzzyNumber zero = FuzzyNumber::crisp(p.alpha, 0.0);
  RangeImage out;
  for (int j = 0; j <= hi; ++j) {
    if (distance(u[j], zero) > p.spec.ball_radius + 1e-8) {
      out.left_ball = true;
      break;
    }
  }

  // Integrand values (or the smooth factor for the singular kind), padded
  // with the null set beyond `hi`; rows up to `hi` never read the padding.
  std::vector<FuzzyNumber> integrand;
  integrand.reserve(p.grid.nodes.size());
  const bool singular = p.spec.rhs.kind == RhsKind::singular_linear;
  for (int j = 0; j <= hi; ++j) {
    if (singular) {
      integrand.push_back(scale(p.spec.rhs.lambda, u[j]));
    } else {
      integrand.push_back(rhs_value(p, j, u[j]));
    }
  }
  integrand.resize(p.grid.nodes.size(), zero);
  FuzzyTrajectory traj(p.grid, std::move(integrand));

  out.a_vals.reserve(hi + 1);
  out.a_vals.push_back(zero);
  for (int m = 1; m <= hi; ++m) {
    out.a_vals.push_back(singular
                             ? weakly_singular_integral(traj, m,
                                                        *p.singular_weights)
                             : fuzzy_integral_unchecked(traj, m, *p.weights));
  }

  const double inv_gamma = 1.0 / p.gamma_q;
  out.t_vals.reserve(hi - lo + 1);
  for (int m = lo; m <= hi; ++m)
    out.t_vals.push_back(add(p.u0[m], scale(inv_gamma, out.a_vals[m])));
  return out;
}

// Largest admissible sup bound for D(f(t, x), 0) over the solve grid given
// that the iterate stayed within distance `r_eff` of the null set.
double holder_m_bound(const PreparedProblem& p, double r_eff) {
  switch (p.spec.rhs.kind) {
    case RhsKind::linear:
      return p.spec.rhs.lambda * r_eff;
    case RhsKind::affine: {
      double c_max = 0.0, g_max = 0.0;
      const FuzzyNumber zero = FuzzyNumber::crisp(p.alpha, 0.0);
      for (size_t j = 0; j < p.c.size(); ++j) {
        c_max = std::max(c_max, p.c[j]);
        g_max = std::max(g_max, distance(p.g[j], zero));
      }
      return c_max * r_eff + g_max;
    }
    case RhsKind::singular_linear:
      return p.spec.rhs.lambda * std::pow(p.grid.nodes[1], -p.spec.rhs.r) *
             r_eff;
  }
  throw std::logic_error("unreachable rhs kind");
}

double ball_reach(const PreparedProblem& p,
                  const std::vector<FuzzyNumber>& u) {
  const FuzzyNumber zero = FuzzyNumber::crisp(p.alpha, 0.0);
  double reach = 0.0;
  for (const auto& v : u) reach = std::max(reach, distance(v, zero));
  return reach;
}

struct HolderSweep {
  bool ok = true;
  double worst_ratio = 0.0;
};

HolderSweep holder_sweep(const PreparedProblem& p,
                         const std::vector<FuzzyNumber>& a_vals,
                         double m_check) {
  HolderSweep sweep;
  const double q = p.spec.q;
  const int hi = static_cast<int>(a_vals.size()) - 1;
  for (int i = 0; i < hi; ++i) {
    for (int j = i + 1; j <= hi; ++j) {
      const double lhs = distance(a_vals[j], a_vals[i]);
      const double bound =
          (2.0 * m_check / q) *
          std::pow(p.grid.nodes[j] - p.grid.nodes[i], q);
      if (lhs > bound + 1e-8) sweep.ok = false;
      if (bound > 0.0)
        sweep.worst_ratio = std::max(sweep.worst_ratio, lhs / bound);
    }
  }
  return sweep;
}

}  // namespace

OperatorImage apply_integral_operator(const PreparedProblem& p,
                                      const FuzzyTrajectory& u) {
  if (!(u.grid == p.grid))
    throw std::invalid_argument("trajectory not on the solve grid");
  RangeImage img = apply_range(p, u.values, 0, p.grid.cells());
  return OperatorImage{FuzzyTrajectory(p.grid, std::move(img.a_vals)),
                       img.left_ball};
}

OperatorImage apply_picard_map(const PreparedProblem& p,
                               const FuzzyTrajectory& u) {
  if (!(u.grid == p.grid))
    throw std::invalid_argument("trajectory not on the solve grid");
  RangeImage img = apply_range(p, u.values, 0, p.grid.cells());
  return OperatorImage{FuzzyTrajectory(p.grid, std::move(img.t_vals)),
                       img.left_ball};
}

CheckResult check_holder_continuity(const PreparedProblem& p,
                                    const FuzzyTrajectory& u, int node_lo,
                                    int node_hi) {
  if (node_lo < 0 || node_hi > p.grid.cells() || node_lo > node_hi)
    throw std::invalid_argument("holder check nodes out of order");
  RangeImage img = apply_range(p, u.values, 0, node_hi);
  const double m_check =
      holder_m_bound(p, std::max(p.spec.ball_radius, ball_reach(p, u.values)));
  const double lhs = distance(img.a_vals[node_hi], img.a_vals[node_lo]);
  const double bound =
      (2.0 * m_check / p.spec.q) *
      std::pow(p.grid.nodes[node_hi] - p.grid.nodes[node_lo], p.spec.q);
  CheckResult res;
  res.bound = bound;
  res.measured = bound > 0.0 ? lhs / bound : 0.0;
  res.pass = lhs <= bound + 1e-8;
  res.note = "D(Au(t2), Au(t1)) vs (2M/q)(t2 - t1)^q";
  return res;
}

CheckResult check_level_equicontinuity_of_image(
    const PreparedProblem& p, const std::vector<FuzzyTrajectory>& sample,
    double epsilon, double delta) {
  if (sample.empty())
    throw std::invalid_argument("equicontinuity check needs a sample");
  const bool singular = p.spec.rhs.kind == RhsKind::singular_linear;
  const int n = p.grid.cells();

  // Modulus of the family of values the weighted sums combine.
  std::vector<FuzzyNumber> entering;
  for (const auto& u : sample) {
    if (!(u.grid == p.grid))
      throw std::invalid_argument("sample trajectory not on the solve grid");
    for (int j = 0; j <= n; ++j) {
      entering.push_back(singular ? scale(p.spec.rhs.lambda, u.values[j])
                                  : rhs_value(p, j, u.values[j]));
    }
  }
  const double premise =
      equicontinuity_modulus(FamilySample(std::move(entering)), delta);

  // Image values per node across the sample.
  std::vector<std::vector<FuzzyNumber>> images(n + 1);
  for (const auto& u : sample) {
    RangeImage img = apply_range(p, u.values, 0, n);
    for (int m = 0; m <= n; ++m)
      images[m].push_back(std::move(img.a_vals[m]));
  }

  CheckResult res;
  res.pass = true;
  double worst_ratio = 0.0;
  double worst_lhs = 0.0;
  for (int m = 1; m <= n; ++m) {
    const auto row = singular ? p.singular_weights->row(m) : p.weights->row(m);
    double mass = 0.0;
    for (double w : row) mass += w;
    const double lhs =
        equicontinuity_modulus(FamilySample(images[m]), delta);
    const double bound = mass * premise;
    worst_lhs = std::max(worst_lhs, lhs);
    if (lhs > bound + 1e-10) res.pass = false;
    if (bound > 0.0) worst_ratio = std::max(worst_ratio, lhs / bound);
  }
  res.measured = worst_ratio;
  res.bound = 1.0;
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "max image modulus %.3g at delta %.3g (epsilon %.3g)",
                worst_lhs, delta, epsilon);
  res.note = buf;
  return res;
}

SolveReport picard_solve(const ProblemSpec& spec) {
  return solve_prepared(prepare(spec));
}

SolveReport solve_prepared(const PreparedProblem& p) {
  SolveReport rep;
  rep.initial_bound = p.initial_bound_value;
  rep.rhs_bound = p.rhs_bound_value.value;
  rep.rhs_bound_method = p.rhs_bound_value.method;
  rep.horizon = p.horizon;

  const int n = p.grid.cells();
  const double tol = p.spec.tol;
  const FuzzyNumber zero = FuzzyNumber::crisp(p.alpha, 0.0);

  std::vector<FuzzyNumber> u = p.u0;
  double selfmap_max = 0.0;
  bool ball_warned = false;
  bool holder_ok = true;
  double holder_worst = 0.0;

  bool converged = false;
  int windows_used = 1;
  for (int windows = 1; windows <= n && !converged; windows *= 2) {
    u = p.u0;
    windows_used = windows;
    bool attempt_ok = true;
    for (int w = 0; w < windows && attempt_ok; ++w) {
      const int w_lo =
          1 + static_cast<int>(static_cast<long>(n) * w / windows);
      const int w_hi =
          static_cast<int>(static_cast<long>(n) * (w + 1) / windows);
      if (w_lo > w_hi) continue;
      bool window_converged = false;
      for (int it = 0; it < p.spec.max_iter; ++it) {
        RangeImage img = apply_range(p, u, w_lo, w_hi);
        if (img.left_ball) ball_warned = true;
        double resid = 0.0;
        for (int m = w_lo; m <= w_hi; ++m) {
          const FuzzyNumber& tv = img.t_vals[m - w_lo];
          resid = std::max(resid, distance(tv, u[m]));
          selfmap_max = std::max(selfmap_max, distance(tv, zero));
          u[m] = tv;
        }
        rep.residual_trace.push_back(resid);
        ++rep.iterations;
        if (windows == 1) {
          const double m_check = holder_m_bound(
              p, std::max(p.spec.ball_radius, ball_reach(p, u)));
          HolderSweep sweep = holder_sweep(p, img.a_vals, m_check);
          holder_ok = holder_ok && sweep.ok;
          holder_worst = std::max(holder_worst, sweep.worst_ratio);
        }
        if (resid < tol) {
          window_converged = true;
          break;
        }
      }
      if (!window_converged) attempt_ok = false;
    }
    converged = attempt_ok;
  }

  rep.status = converged ? SolveStatus::converged : SolveStatus::non_converged;
  rep.windows = windows_used;

  // Final fixed-point residual and checks over the full horizon.
  RangeImage fin = apply_range(p, u, 0, n);
  if (fin.left_ball) ball_warned = true;
  double final_resid = 0.0;
  for (int m = 0; m <= n; ++m) {
    final_resid = std::max(final_resid, distance(fin.t_vals[m], u[m]));
    selfmap_max = std::max(selfmap_max, distance(fin.t_vals[m], zero));
  }
  rep.final_residual = final_resid;

  {
    const double m_check =
        holder_m_bound(p, std::max(p.spec.ball_radius, ball_reach(p, u)));
    HolderSweep sweep = holder_sweep(p, fin.a_vals, m_check);
    holder_ok = holder_ok && sweep.ok;
    holder_worst = std::max(holder_worst, sweep.worst_ratio);
  }

  CheckResult self_map;
  self_map.measured = selfmap_max;
  self_map.bound = p.spec.ball_radius;
  self_map.pass = selfmap_max <= p.spec.ball_radius + 1e-8;
  self_map.note = "sup over iterates of D(Tu, 0) vs R";
  rep.checks["self_map"] = self_map;

  CheckResult holder;
  holder.pass = holder_ok;
  holder.measured = holder_worst;
  holder.bound = 1.0;
  holder.note = "worst ratio of D(Au(t2), Au(t1)) to (2M/q)(t2 - t1)^q";
  rep.checks["holder"] = holder;

  {
    std::vector<FuzzyTrajectory> sample;
    sample.emplace_back(p.grid, p.u0);
    sample.emplace_back(p.grid, u);
    rep.checks["level_equicontinuity"] =
        check_level_equicontinuity_of_image(p, sample, 1.0, 0.25);
  }

  if (ball_warned)
    rep.warnings.push_back(
        "an iterate left the radius-R ball; estimates outside the ball are "
        "not covered by the horizon construction");
  if (!converged)
    rep.warnings.push_back(
        "fixed-point iteration did not reach tol within max_iter even after "
        "window splitting");

  rep.solution = FuzzyTrajectory(p.grid, std::move(u));
  return rep;
}

}  // namespace fuzzband
