#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "kanbench/spline/knot_grid.hpp"

namespace kanbench {

/// The at most degree+1 basis values that can be nonzero at one point.
/// values[r] belongs to basis index first + r; count is 0 when x lies
/// outside the support of every basis function.
struct BasisWindow {
  std::ptrdiff_t first = 0;
  int count = 0;
  std::array<double, kMaxSplineDegree + 1> values{};
};

/// Nonzero B_j(x) by the triangular Cox-de Boor scheme.
BasisWindow basis_window(const KnotGrid& grid, double x) noexcept;

/// Nonzero dB_j/dx at x, same indexing as basis_window. Degree 0 yields an
/// empty window.
BasisWindow basis_derivative_window(const KnotGrid& grid, double x) noexcept;

/// All basis_count() values B_j(x). No clamping: outside the knot span every
/// entry is zero.
std::vector<double> eval_basis(const KnotGrid& grid, double x);

/// All basis_count() derivatives dB_j/dx.
std::vector<double> eval_basis_derivative(const KnotGrid& grid, double x);

class SplineFunction {
 public:
  SplineFunction(KnotGrid grid, std::vector<double> coefficients);

  /// Zero spline on `grid`.
  explicit SplineFunction(KnotGrid grid);

  const KnotGrid& grid() const noexcept { return grid_; }
  std::span<const double> coefficients() const noexcept { return coef_; }
  std::span<double> coefficients() noexcept { return coef_; }

  double operator()(double x) const noexcept;
  double derivative(double x) const noexcept;

  bool operator==(const SplineFunction&) const = default;

 private:
  KnotGrid grid_;
  std::vector<double> coef_;
};

double eval_spline(const SplineFunction& f, double x) noexcept;

/// Refit `f` onto `target` by least squares over `samples`, each sample
/// weighted equally. Throws std::invalid_argument when there are fewer
/// distinct samples than target coefficients, and DegenerateSystemError when
/// the samples leave some target basis function unconstrained.
SplineFunction extend_grid(const SplineFunction& f, const KnotGrid& target,
                           std::span<const double> samples);

/// Coarse-to-fine refinement: same range and degree, `intervals` spans.
SplineFunction extend_grid(const SplineFunction& f, int intervals,
                           std::span<const double> samples);

enum class WidenPolicy {
  /// Keep the knot spacing; the new end points snap outward to whole
  /// multiples of it so every old knot remains a knot and the old spline is
  /// reproduced exactly. The interval count grows.
  keep_spacing,
  /// Keep the interval count (and so the coefficient count); the spacing
  /// stretches and the refit is approximate.
  keep_count,
};

/// Grid whose range covers [lo, hi] and the current range of `grid`.
KnotGrid widened_grid(const KnotGrid& grid, double lo, double hi, WidenPolicy policy);

/// Range-widening refit onto widened_grid(f.grid(), lo, hi, policy).
SplineFunction widen_range(const SplineFunction& f, double lo, double hi,
                           std::span<const double> samples,
                           WidenPolicy policy = WidenPolicy::keep_spacing);

}  // namespace kanbench
