#include "fuzzband/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace fuzzband {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1] (positive abscissae; the rule is
// symmetric).  Abramowitz & Stegun table 25.4.
constexpr double kGaussX[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double kGaussW[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

template <typename F>
double gauss16(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kGaussX[i];
    sum += kGaussW[i] * (f(mid + dx) + f(mid - dx));
  }
  return half * sum;
}

// Integral over [0, 1] by composite Gauss on dyadic panels toward 0; handles
// integrands that are analytic away from the origin but have unbounded
// higher derivatives there (fractional powers of sigma).
template <typename F>
double integrate_dyadic(F&& f) {
  double total = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 48; ++k) {
    const double lo = 0.5 * hi;
    total += gauss16(f, lo, hi);
    hi = lo;
  }
  total += gauss16(f, 0.0, hi);
  return total;
}

// a^p - b^p for 0 <= b <= a without cancellation blowup near b = a.
double pow_diff(double a, double b, double p) {
  if (b <= 0.0) return std::pow(a, p);
  const double ratio = b / a;
  if (ratio > 0.5)
    return -std::pow(a, p) * std::expm1(p * std::log1p((b - a) / a));
  return std::pow(a, p) - std::pow(b, p);
}

// Right-hat cell moment: int_b^a tau^{q-1} (a - tau) d tau with a = b + h.
// Near the diagonal the closed form is stable; in the far field (h << b) it
// cancels catastrophically, so switch to the binomial series of
// (b + y)^{q-1} around y/b, which decays at least geometrically.
double right_hat_moment(double a, double b, double q) {
  const double h = a - b;
  if (b <= 2.0 * h) {
    const double mass = pow_diff(a, b, q) / q;
    return a * mass - pow_diff(a, b, q + 1.0) / (q + 1.0);
  }
  const double z = h / b;  // < 1/2
  double sum = 0.0, coeff = 1.0, zk = 1.0;
  for (int k = 0; k < 80; ++k) {
    const double term = coeff * zk / ((k + 1.0) * (k + 2.0));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    coeff *= (q - 1.0 - k) / (k + 1.0);
    zk *= z;
  }
  return std::pow(b, q - 1.0) * h * h * sum;
}

// Kernel moments of one cell [t_j, t_j + h] at offsets a = t_n - t_j,
// b = a - h: total mass and the two hat shares (not yet divided by h).
// Strongly graded meshes can make h fall below the rounding resolution of
// the offsets; the trapezoidal limit of the kernel handles that regime with
// relative error O(h/a).
struct CellMoments {
  double mass;
  double left;
  double right;
};

CellMoments kernel_cell_moments(double a, double b, double h, double q) {
  if (h <= 1e-8 * a) {
    const double kern = std::pow(a, q - 1.0);
    return {kern * h, 0.5 * kern * h * h, 0.5 * kern * h * h};
  }
  const double mass = pow_diff(a, b, q) / q;
  const double right = right_hat_moment(a, b, q);
  return {mass, h * mass - right, right};
}

void require_q(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("kernel exponent q must lie in (0, 1)");
}

void require_row(const TimeGrid& grid, int upto) {
  if (upto < 1 || upto > grid.cells())
    throw std::invalid_argument("row index outside grid");
}

void require_matching(const FuzzyTrajectory& f, const TimeGrid& grid) {
  if (!(f.grid == grid))
    throw std::invalid_argument("trajectory and weights use different grids");
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> nodes_, double grading_)
    : nodes(std::move(nodes_)), grading(grading_) {
  if (nodes.size() < 2) throw std::invalid_argument("time grid needs >= 1 cell");
  if (nodes.front() != 0.0)
    throw std::invalid_argument("time grid must start at t = 0");
  for (size_t j = 1; j < nodes.size(); ++j) {
    if (!std::isfinite(nodes[j]) || nodes[j] <= nodes[j - 1])
      throw std::invalid_argument("time grid must be strictly increasing");
  }
}

TimeGrid TimeGrid::uniform(double eta, int n) { return graded(eta, n, 1.0); }

TimeGrid TimeGrid::graded(double eta, int n, double grading) {
  if (!(eta > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (n < 1) throw std::invalid_argument("time grid needs >= 1 cell");
  if (!(grading >= 1.0)) throw std::invalid_argument("grading must be >= 1");
  std::vector<double> nodes(n + 1);
  for (int j = 0; j <= n; ++j) {
    nodes[j] = (j == n) ? eta
                        : eta * std::pow(static_cast<double>(j) / n, grading);
  }
  return TimeGrid(std::move(nodes), grading);
}

double gamma_fn(double x) {
  if (!(x > 0.0))
    throw std::domain_error("gamma_fn requires a positive argument");
  return std::tgamma(x);
}

double beta_fn(double x, double y) {
  if (!(x > 0.0 && y > 0.0))
    throw std::domain_error("beta_fn requires positive arguments");
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

KernelWeights product_trapezoid_weights(double q, const TimeGrid& grid) {
  require_q(q);
  const int n_cells = grid.cells();
  KernelWeights kw{q, grid, {}};
  kw.rows.resize(n_cells);
  for (int n = 1; n <= n_cells; ++n) {
    const double tn = grid.nodes[n];
    std::vector<double>& w = kw.rows[n - 1];
    w.assign(n + 1, 0.0);
    double row_sum_expected = std::pow(tn, q) / q;
    for (int j = 0; j < n; ++j) {
      const double a = tn - grid.nodes[j];      // larger kernel offset
      const double b = tn - grid.nodes[j + 1];  // smaller kernel offset
      const double h = grid.nodes[j + 1] - grid.nodes[j];
      const CellMoments cell = kernel_cell_moments(a, b, h, q);
      w[j] += cell.left / h;
      w[j + 1] += cell.right / h;
    }
    double row_sum = 0.0;
    for (double& wj : w) {
      if (wj < 0.0) {
        if (wj > -1e-13 * row_sum_expected) {
          wj = 0.0;
        } else {
          throw std::logic_error("negative product-integration weight");
        }
      }
      row_sum += wj;
    }
    if (std::abs(row_sum - row_sum_expected) > 1e-12 * row_sum_expected)
      throw std::logic_error("kernel weight row sum drifted from t^q/q");
  }
  return kw;
}

FuzzyTrajectory::FuzzyTrajectory(TimeGrid grid_,
                                 std::vector<FuzzyNumber> values_)
    : grid(std::move(grid_)), values(std::move(values_)) {
  if (values.size() != grid.nodes.size())
    throw std::invalid_argument("trajectory needs one value per time node");
  for (const auto& v : values) {
    if (!(v.grid() == values.front().grid()))
      throw std::invalid_argument("trajectory values must share an alpha grid");
  }
}

double trajectory_distance(const FuzzyTrajectory& f,
                           const FuzzyTrajectory& g) {
  if (!(f.grid == g.grid))
    throw std::invalid_argument("trajectories live on different time grids");
  double d = 0.0;
  for (size_t j = 0; j < f.values.size(); ++j)
    d = std::max(d, distance(f.values[j], g.values[j]));
  return d;
}

FuzzyNumber sample_trajectory(const FuzzyTrajectory& f, double t) {
  const auto& nodes = f.grid.nodes;
  if (!(t >= nodes.front() && t <= nodes.back()))
    throw std::invalid_argument("sample time outside trajectory span");
  size_t j = 1;
  while (j + 1 < nodes.size() && nodes[j] < t) ++j;
  const double h = nodes[j] - nodes[j - 1];
  const double theta = (t - nodes[j - 1]) / h;
  if (theta <= 0.0) return f.values[j - 1];
  if (theta >= 1.0) return f.values[j];
  return add(scale(1.0 - theta, f.values[j - 1]), scale(theta, f.values[j]));
}

namespace {

FuzzyNumber weighted_level_sum(const std::vector<FuzzyNumber>& values,
                               std::span<const double> w,
                               const AlphaGrid& alpha) {
  const size_t levels = static_cast<size_t>(alpha.node_count());
  std::vector<double> lower(levels, 0.0), upper(levels, 0.0);
  for (size_t j = 0; j < w.size(); ++j) {
    const double wj = w[j];
    if (wj == 0.0) continue;
    const auto& lo = values[j].lower();
    const auto& up = values[j].upper();
    for (size_t i = 0; i < levels; ++i) {
      lower[i] += wj * lo[i];
      upper[i] += wj * up[i];
    }
  }
  return FuzzyNumber(alpha, std::move(lower), std::move(upper));
}

}  // namespace

FuzzyNumber fuzzy_integral_unchecked(const FuzzyTrajectory& f, int upto,
                                     const KernelWeights& weights) {
  require_matching(f, weights.grid);
  require_row(f.grid, upto);
  return weighted_level_sum(f.values, weights.row(upto),
                            f.values.front().grid());
}

FuzzyNumber fuzzy_integral(const FuzzyTrajectory& f, int upto,
                           const KernelWeights& weights) {
  for (size_t j = 0; j < f.values.size(); ++j) {
    Validity v = validate(f.values[j]);
    if (!v.ok)
      throw std::invalid_argument("invalid trajectory member at node " +
                                  std::to_string(j) + ": " + v.message);
  }
  return fuzzy_integral_unchecked(f, upto, weights);
}

IntegralBoundCheck integral_metric_bound_check(const FuzzyTrajectory& f,
                                               const FuzzyTrajectory& g,
                                               const KernelWeights& weights,
                                               int upto) {
  if (!(f.grid == g.grid))
    throw std::invalid_argument("trajectories live on different time grids");
  IntegralBoundCheck out;
  out.lhs = distance(fuzzy_integral(f, upto, weights),
                     fuzzy_integral(g, upto, weights));
  const auto w = weights.row(upto);
  out.rhs = 0.0;
  for (size_t j = 0; j < w.size(); ++j)
    out.rhs += w[j] * distance(f.values[j], g.values[j]);
  out.slack = out.rhs - out.lhs;
  out.ok = out.lhs <= out.rhs + 1e-10;
  return out;
}

SingularKernelWeights singular_product_weights(double q, double r,
                                               const TimeGrid& grid) {
  require_q(q);
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("singular exponent r must lie in (0, 1)");
  const int n_cells = grid.cells();
  const double t1 = grid.nodes[1];
  const double p = 1.0 / (1.0 - r);  // sigma = (s/t1)^{1-r} substitution
  const double front = std::pow(t1, 1.0 - r) / (1.0 - r);

  SingularKernelWeights sw{q, r, grid, {}};
  sw.rows.resize(n_cells);
  std::vector<double> node_power(n_cells + 1, 0.0);
  for (int j = 1; j <= n_cells; ++j)
    node_power[j] = std::pow(grid.nodes[j], -r);

  for (int n = 1; n <= n_cells; ++n) {
    const double tn = grid.nodes[n];
    std::vector<double>& w = sw.rows[n - 1];
    w.assign(n + 1, 0.0);

    // Tail cells [t_1, t_n]: product-trapezoidal hat weights applied to the
    // nodal values of s^{-r} w(s).
    for (int j = 1; j < n; ++j) {
      const double a = tn - grid.nodes[j];
      const double b = tn - grid.nodes[j + 1];
      const double h = grid.nodes[j + 1] - grid.nodes[j];
      const CellMoments cell = kernel_cell_moments(a, b, h, q);
      w[j] += (cell.left / h) * node_power[j];
      w[j + 1] += (cell.right / h) * node_power[j + 1];
    }

    // First cell [0, t_1] with both singular factors inside the moments:
    //   M0 = int (tn - s)^{q-1} s^{-r} ds,  M1 = same with factor (s/t1).
    double m0, m1;
    if (n == 1) {
      const double scale = std::pow(t1, q - r);
      m0 = scale * beta_fn(1.0 - r, q);
      m1 = scale * beta_fn(2.0 - r, q);
    } else {
      m0 = front * integrate_dyadic([&](double sigma) {
             return std::pow(tn - t1 * std::pow(sigma, p), q - 1.0);
           });
      m1 = front * integrate_dyadic([&](double sigma) {
             const double sp = std::pow(sigma, p);
             return std::pow(tn - t1 * sp, q - 1.0) * sp;
           });
    }
    w[0] += m0 - m1;  // hat at the origin, applied to the smooth factor
    w[1] += m1;       // hat at t_1, applied to the smooth factor

    for (double wj : w) {
      if (wj < 0.0)
        throw std::logic_error("negative singular product weight");
    }
  }
  return sw;
}

FuzzyNumber weakly_singular_integral(const FuzzyTrajectory& smooth, int upto,
                                     const SingularKernelWeights& weights) {
  require_matching(smooth, weights.grid);
  require_row(smooth.grid, upto);
  return weighted_level_sum(smooth.values, weights.row(upto),
                            smooth.values.front().grid());
}

}  // namespace fuzzband
