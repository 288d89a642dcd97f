#pragma once

#include <cstddef>
#include <vector>

namespace kanbench {

/// Highest B-spline degree supported; local basis windows are fixed-size.
inline constexpr int kMaxSplineDegree = 7;

/// Uniform knot vector over [lo, hi] with `intervals` interior spans and
/// `degree` extra knots continuing the same spacing past each end.
///
/// Knot t_i = lo + (hi - lo) * (i - degree) / intervals for i in
/// [0, intervals + 2*degree]; the index may also be evaluated outside that
/// range, which the local basis recursion uses near the ends.
class KnotGrid {
 public:
  KnotGrid(double lo, double hi, int intervals, int degree);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  int intervals() const noexcept { return intervals_; }
  int degree() const noexcept { return degree_; }
  double spacing() const noexcept { return (hi_ - lo_) / intervals_; }

  std::size_t basis_count() const noexcept {
    return static_cast<std::size_t>(intervals_ + degree_);
  }
  std::size_t knot_count() const noexcept {
    return static_cast<std::size_t>(intervals_ + 2 * degree_ + 1);
  }

  double knot(std::ptrdiff_t i) const noexcept {
    return lo_ + (hi_ - lo_) * static_cast<double>(i - degree_) / intervals_;
  }
  std::vector<double> knots() const;

  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

  bool operator==(const KnotGrid&) const = default;

 private:
  double lo_;
  double hi_;
  int intervals_;
  int degree_;
};

}  // namespace kanbench
