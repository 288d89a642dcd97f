#include <cmath>

#include "kanbench/numeric/kernels.hpp"

namespace kanbench::kernels::scalar {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] += dot(a + r * cols, x, cols);
}

void gemv_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) axpy(x[r], a + r * cols, y, cols);
}

void rank1_update(double alpha, const double* u, std::size_t rows, const double* v,
                  std::size_t cols, double* a) {
  for (std::size_t r = 0; r < rows; ++r) axpy(alpha * u[r], v, a + r * cols, cols);
}

void adam_update(double* p, const double* g, double* m, double* v, std::size_t n,
                 const AdamCoefficients& c) {
  const double one_minus_b1 = 1.0 - c.beta1;
  const double one_minus_b2 = 1.0 - c.beta2;
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = c.beta1 * m[i] + one_minus_b1 * g[i];
    v[i] = c.beta2 * v[i] + one_minus_b2 * (g[i] * g[i]);
    const double m_hat = m[i] / c.bias_correction1;
    const double v_hat = v[i] / c.bias_correction2;
    p[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
  }
}

}  // namespace

const KernelTable table{Isa::scalar, dot, axpy, gemv, gemv_t, rank1_update, adam_update};

}  // namespace kanbench::kernels::scalar
