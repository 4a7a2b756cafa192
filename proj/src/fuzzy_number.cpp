#include "fuzzband/fuzzy_number.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace fuzzband {

namespace {

std::string defect_text(BandDefect d, int i) {
  char buf[96];
  switch (d) {
    case BandDefect::none:
      return "valid";
    case BandDefect::bad_size:
      return "band arrays must both have K+1 entries";
    case BandDefect::nonfinite:
      std::snprintf(buf, sizeof buf, "non-finite endpoint at level %d", i);
      return buf;
    case BandDefect::crossing:
      std::snprintf(buf, sizeof buf, "lower exceeds upper at level %d", i);
      return buf;
    case BandDefect::lower_not_monotone:
      std::snprintf(buf, sizeof buf,
                    "lower endpoints must be nondecreasing (level %d)", i);
      return buf;
    case BandDefect::upper_not_monotone:
      std::snprintf(buf, sizeof buf,
                    "upper endpoints must be nonincreasing (level %d)", i);
      return buf;
  }
  return "unknown defect";
}

Validity fail(BandDefect d, int i) {
  return Validity{false, d, i, defect_text(d, i)};
}

}  // namespace

Validity validate_band(const AlphaGrid& grid, std::span<const double> lower,
                       std::span<const double> upper, double tol) {
  const size_t n = static_cast<size_t>(grid.node_count());
  if (lower.size() != n || upper.size() != n)
    return fail(BandDefect::bad_size, -1);
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
      return fail(BandDefect::nonfinite, static_cast<int>(i));
    if (lower[i] > upper[i] + tol)
      return fail(BandDefect::crossing, static_cast<int>(i));
    if (i > 0) {
      if (lower[i] < lower[i - 1] - tol)
        return fail(BandDefect::lower_not_monotone, static_cast<int>(i));
      if (upper[i] > upper[i - 1] + tol)
        return fail(BandDefect::upper_not_monotone, static_cast<int>(i));
    }
  }
  return Validity{};
}

FuzzyNumber::FuzzyNumber(AlphaGrid grid, std::vector<double> lower,
                         std::vector<double> upper)
    : grid_(grid), lower_(std::move(lower)), upper_(std::move(upper)) {
  Validity v = validate_band(grid_, lower_, upper_);
  if (!v.ok) throw std::invalid_argument("invalid fuzzy band: " + v.message);
}

FuzzyNumber FuzzyNumber::crisp(const AlphaGrid& grid, double c) {
  const size_t n = static_cast<size_t>(grid.node_count());
  return FuzzyNumber(grid, std::vector<double>(n, c),
                     std::vector<double>(n, c));
}

FuzzyNumber FuzzyNumber::triangular(const AlphaGrid& grid, double l, double m,
                                    double r) {
  if (!(l <= m && m <= r))
    throw std::invalid_argument("triangular requires l <= m <= r");
  const int k = grid.cells;
  std::vector<double> lower(k + 1), upper(k + 1);
  for (int i = 0; i < k; ++i) {
    const double a = grid.node(i);
    lower[i] = l + a * (m - l);
    upper[i] = r - a * (r - m);
  }
  // Core node pinned exactly so the band never crosses from rounding.
  lower[k] = m;
  upper[k] = m;
  return FuzzyNumber(grid, std::move(lower), std::move(upper));
}

Interval FuzzyNumber::level_at(double alpha) const {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::domain_error("alpha must lie in [0, 1]");
  const int k = grid_.cells;
  const double pos = alpha * k;
  int i = static_cast<int>(pos);
  if (i >= k) return level(k);
  const double frac = pos - i;
  return {lower_[i] + frac * (lower_[i + 1] - lower_[i]),
          upper_[i] + frac * (upper_[i + 1] - upper_[i])};
}

Validity validate(const FuzzyNumber& u, double tol) {
  return validate_band(u.grid(), u.lower(), u.upper(), tol);
}

namespace {

void require_same_grid(const FuzzyNumber& u, const FuzzyNumber& v) {
  if (!(u.grid() == v.grid()))
    throw std::invalid_argument("fuzzy numbers live on different alpha grids");
}

}  // namespace

FuzzyNumber add(const FuzzyNumber& u, const FuzzyNumber& v) {
  require_same_grid(u, v);
  const size_t n = u.lower().size();
  std::vector<double> lower(n), upper(n);
  for (size_t i = 0; i < n; ++i) {
    lower[i] = u.lower()[i] + v.lower()[i];
    upper[i] = u.upper()[i] + v.upper()[i];
  }
  return FuzzyNumber(u.grid(), std::move(lower), std::move(upper));
}

FuzzyNumber scale(double lambda, const FuzzyNumber& u) {
  const size_t n = u.lower().size();
  std::vector<double> lower(n), upper(n);
  if (lambda >= 0.0) {
    for (size_t i = 0; i < n; ++i) {
      lower[i] = lambda * u.lower()[i];
      upper[i] = lambda * u.upper()[i];
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      lower[i] = lambda * u.upper()[i];
      upper[i] = lambda * u.lower()[i];
    }
  }
  return FuzzyNumber(u.grid(), std::move(lower), std::move(upper));
}

double distance(const FuzzyNumber& u, const FuzzyNumber& v) {
  require_same_grid(u, v);
  double d = 0.0;
  const size_t n = u.lower().size();
  for (size_t i = 0; i < n; ++i) {
    d = std::max(d, std::abs(u.lower()[i] - v.lower()[i]));
    d = std::max(d, std::abs(u.upper()[i] - v.upper()[i]));
  }
  return d;
}

EndpointCurves embed(const FuzzyNumber& u) {
  return EndpointCurves{u.grid(), u.lower(), u.upper()};
}

double sup_distance(const EndpointCurves& f, const EndpointCurves& g) {
  if (!(f.grid == g.grid))
    throw std::invalid_argument("endpoint curves live on different grids");
  double d = 0.0;
  for (size_t i = 0; i < f.lower.size(); ++i) {
    d = std::max(d, std::max(std::abs(f.lower[i] - g.lower[i]),
                             std::abs(f.upper[i] - g.upper[i])));
  }
  return d;
}

FuzzyNumber coarsen(const FuzzyNumber& u) {
  const int k = u.grid().cells;
  if (k % 2 != 0 || k < 4)
    throw std::invalid_argument("coarsen needs an even cell count >= 4");
  std::vector<double> lower(k / 2 + 1), upper(k / 2 + 1);
  for (int i = 0; i <= k / 2; ++i) {
    lower[i] = u.lower()[2 * i];
    upper[i] = u.upper()[2 * i];
  }
  return FuzzyNumber(AlphaGrid(k / 2), std::move(lower), std::move(upper));
}

}  // namespace fuzzband
