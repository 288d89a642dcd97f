#include "kanbench/numeric/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kanbench/numeric/kernels.hpp"

namespace kanbench {

std::vector<double> least_squares(const Matrix& a, std::span<const double> b) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m) throw std::invalid_argument("least_squares: rhs length != rows");
  if (n == 0) throw std::invalid_argument("least_squares: matrix has no columns");
  if (m < n) throw std::invalid_argument("least_squares: underdetermined system (rows < cols)");

  const auto& k = kernels::active();

  // Column-major working copy so each Householder reflection touches
  // contiguous memory.
  std::vector<double> qr(m * n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double v = a(r, c);
      if (!std::isfinite(v)) throw std::invalid_argument("least_squares: non-finite entry");
      qr[c * m + r] = v;
    }
  }
  std::vector<double> rhs(b.begin(), b.end());
  std::vector<double> diag(n);

  for (std::size_t j = 0; j < n; ++j) {
    double* col = qr.data() + j * m;
    const std::size_t len = m - j;
    const double norm = std::sqrt(k.dot(col + j, col + j, len));
    if (norm == 0.0) {
      diag[j] = 0.0;
      continue;
    }
    const double alpha = col[j] > 0 ? -norm : norm;
    // v = x - alpha e1, stored in place; reflector H = I - 2 v v^T / (v^T v)
    col[j] -= alpha;
    const double vtv = k.dot(col + j, col + j, len);
    for (std::size_t c = j + 1; c < n; ++c) {
      double* other = qr.data() + c * m;
      const double s = -2.0 * k.dot(col + j, other + j, len) / vtv;
      k.axpy(s, col + j, other + j, len);
    }
    const double s = -2.0 * k.dot(col + j, rhs.data() + j, len) / vtv;
    k.axpy(s, col + j, rhs.data() + j, len);
    diag[j] = alpha;
  }

  double max_diag = 0.0;
  for (double d : diag) max_diag = std::max(max_diag, std::abs(d));
  const double tol =
      static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon() * max_diag;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(std::abs(diag[j]) > tol)) {
      throw DegenerateSystemError("least_squares: rank-deficient system (column " +
                                  std::to_string(j) + ")");
    }
  }

  // Back substitution on R, whose strict upper part lives above the diagonal
  // of the column-major buffer.
  std::vector<double> x(n);
  for (std::size_t jj = n; jj-- > 0;) {
    double s = rhs[jj];
    for (std::size_t c = jj + 1; c < n; ++c) s -= qr[c * m + jj] * x[c];
    x[jj] = s / diag[jj];
  }
  return x;
}

std::vector<double> xavier_init(Rng& rng, std::size_t fan_in, std::size_t fan_out,
                                std::size_t n) {
  if (fan_in == 0 || fan_out == 0) throw std::invalid_argument("xavier_init: zero fan");
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<double> out(n);
  for (auto& v : out) v = rng.uniform(-bound, bound);
  return out;
}

}  // namespace kanbench
