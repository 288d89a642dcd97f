#include "kanbench/spline/spline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kanbench/numeric/linalg.hpp"

namespace kanbench {
namespace {

// Index s with t_s <= x < t_{s+1}, or -1 when x is outside [t_0, t_last).
// Degree 0 closes the last interior span at hi so the indicators still sum
// to one on the whole range.
std::ptrdiff_t find_span(const KnotGrid& grid, double x) noexcept {
  const auto last = static_cast<std::ptrdiff_t>(grid.knot_count()) - 1;
  if (!std::isfinite(x)) return -1;
  if (grid.degree() == 0 && x == grid.hi()) return last - 1;
  if (x < grid.knot(0) || x >= grid.knot(last)) return -1;
  auto s = static_cast<std::ptrdiff_t>(std::floor((x - grid.knot(0)) / grid.spacing()));
  s = std::clamp<std::ptrdiff_t>(s, 0, last - 1);
  while (s > 0 && x < grid.knot(s)) --s;
  while (s + 1 < last && x >= grid.knot(s + 1)) ++s;
  return s;
}

// values[r] = B_{s-p+r, p}(x) for r in [0, p]; knot indices may run past the
// stored vector, where the uniform formula supplies virtual knots.
void local_basis(const KnotGrid& grid, std::ptrdiff_t s, double x, int p, double* values) noexcept {
  std::array<double, kMaxSplineDegree + 1> left{};
  std::array<double, kMaxSplineDegree + 1> right{};
  values[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - grid.knot(s + 1 - j);
    right[j] = grid.knot(s + j) - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = values[r] / (right[r + 1] + left[j - r]);
      values[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    values[j] = saved;
  }
}

BasisWindow clip(const KnotGrid& grid, std::ptrdiff_t first, const double* values, int count) {
  BasisWindow w;
  const auto n = static_cast<std::ptrdiff_t>(grid.basis_count());
  const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(first, 0);
  const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(first + count, n);
  if (lo >= hi) return w;
  w.first = lo;
  w.count = static_cast<int>(hi - lo);
  for (std::ptrdiff_t i = lo; i < hi; ++i) w.values[i - lo] = values[i - first];
  return w;
}

}  // namespace

BasisWindow basis_window(const KnotGrid& grid, double x) noexcept {
  const std::ptrdiff_t s = find_span(grid, x);
  if (s < 0) return {};
  const int k = grid.degree();
  std::array<double, kMaxSplineDegree + 1> values{};
  local_basis(grid, s, x, k, values.data());
  return clip(grid, s - k, values.data(), k + 1);
}

BasisWindow basis_derivative_window(const KnotGrid& grid, double x) noexcept {
  const int k = grid.degree();
  if (k == 0) return {};
  const std::ptrdiff_t s = find_span(grid, x);
  if (s < 0) return {};
  std::array<double, kMaxSplineDegree + 1> lower{};
  local_basis(grid, s, x, k - 1, lower.data());
  std::array<double, kMaxSplineDegree + 1> d{};
  for (int r = 0; r <= k; ++r) {
    const std::ptrdiff_t j = s - k + r;
    double v = 0.0;
    if (r >= 1) v += k / (grid.knot(j + k) - grid.knot(j)) * lower[r - 1];
    if (r <= k - 1) v -= k / (grid.knot(j + k + 1) - grid.knot(j + 1)) * lower[r];
    d[r] = v;
  }
  return clip(grid, s - k, d.data(), k + 1);
}

namespace {
std::vector<double> scatter(const KnotGrid& grid, const BasisWindow& w) {
  std::vector<double> out(grid.basis_count(), 0.0);
  for (int r = 0; r < w.count; ++r) out[w.first + r] = w.values[r];
  return out;
}
}  // namespace

std::vector<double> eval_basis(const KnotGrid& grid, double x) {
  return scatter(grid, basis_window(grid, x));
}

std::vector<double> eval_basis_derivative(const KnotGrid& grid, double x) {
  return scatter(grid, basis_derivative_window(grid, x));
}

SplineFunction::SplineFunction(KnotGrid grid, std::vector<double> coefficients)
    : grid_(grid), coef_(std::move(coefficients)) {
  if (coef_.size() != grid_.basis_count()) {
    throw std::invalid_argument("SplineFunction: coefficient count != basis count");
  }
  for (double c : coef_) {
    if (!std::isfinite(c)) throw std::invalid_argument("SplineFunction: non-finite coefficient");
  }
}

SplineFunction::SplineFunction(KnotGrid grid)
    : grid_(grid), coef_(grid.basis_count(), 0.0) {}

double SplineFunction::operator()(double x) const noexcept {
  const BasisWindow w = basis_window(grid_, x);
  double s = 0.0;
  for (int r = 0; r < w.count; ++r) s += coef_[w.first + r] * w.values[r];
  return s;
}

double SplineFunction::derivative(double x) const noexcept {
  const BasisWindow w = basis_derivative_window(grid_, x);
  double s = 0.0;
  for (int r = 0; r < w.count; ++r) s += coef_[w.first + r] * w.values[r];
  return s;
}

double eval_spline(const SplineFunction& f, double x) noexcept { return f(x); }

SplineFunction extend_grid(const SplineFunction& f, const KnotGrid& target,
                           std::span<const double> samples) {
  const std::size_t n = target.basis_count();
  if (samples.empty()) throw std::invalid_argument("extend_grid: no samples");
  if (samples.size() < n) {
    throw std::invalid_argument("extend_grid: fewer samples than target coefficients");
  }
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  if (*mn == *mx) throw std::invalid_argument("extend_grid: all samples identical");

  Matrix design(samples.size(), n);
  std::vector<double> rhs(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const BasisWindow w = basis_window(target, samples[i]);
    for (int r = 0; r < w.count; ++r) design(i, w.first + r) = w.values[r];
    rhs[i] = f(samples[i]);
  }
  return SplineFunction(target, least_squares(design, rhs));
}

SplineFunction extend_grid(const SplineFunction& f, int intervals,
                           std::span<const double> samples) {
  const KnotGrid& g = f.grid();
  return extend_grid(f, KnotGrid(g.lo(), g.hi(), intervals, g.degree()), samples);
}

KnotGrid widened_grid(const KnotGrid& grid, double lo, double hi, WidenPolicy policy) {
  const double new_lo = std::min(lo, grid.lo());
  const double new_hi = std::max(hi, grid.hi());
  if (policy == WidenPolicy::keep_count) {
    return KnotGrid(new_lo, new_hi, grid.intervals(), grid.degree());
  }
  const double h = grid.spacing();
  const auto below = static_cast<int>(std::ceil((grid.lo() - new_lo) / h));
  const auto above = static_cast<int>(std::ceil((new_hi - grid.hi()) / h));
  const int add_lo = std::max(below, 0);
  const int add_hi = std::max(above, 0);
  return KnotGrid(grid.lo() - add_lo * h, grid.hi() + add_hi * h,
                  grid.intervals() + add_lo + add_hi, grid.degree());
}

SplineFunction widen_range(const SplineFunction& f, double lo, double hi,
                           std::span<const double> samples, WidenPolicy policy) {
  return extend_grid(f, widened_grid(f.grid(), lo, hi, policy), samples);
}

}  // namespace kanbench
