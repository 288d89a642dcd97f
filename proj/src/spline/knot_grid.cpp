#include "kanbench/spline/knot_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kanbench {

KnotGrid::KnotGrid(double lo, double hi, int intervals, int degree)
    : lo_(lo), hi_(hi), intervals_(intervals), degree_(degree) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw std::invalid_argument("KnotGrid: range must satisfy lo < hi");
  }
  if (intervals < 1) throw std::invalid_argument("KnotGrid: intervals must be >= 1");
  if (degree < 0 || degree > kMaxSplineDegree) {
    throw std::invalid_argument("KnotGrid: degree must be in [0, " +
                                std::to_string(kMaxSplineDegree) + "]");
  }
}

std::vector<double> KnotGrid::knots() const {
  std::vector<double> out(knot_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = knot(static_cast<std::ptrdiff_t>(i));
  return out;
}

}  // namespace kanbench
