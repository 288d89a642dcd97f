#include <arm_neon.h>

#include <cmath>

#include "kanbench/numeric/kernels.hpp"

namespace kanbench::kernels::neon {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
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
  const float64x2_t b1 = vdupq_n_f64(c.beta1);
  const float64x2_t b2 = vdupq_n_f64(c.beta2);
  const float64x2_t omb1 = vdupq_n_f64(one_minus_b1);
  const float64x2_t omb2 = vdupq_n_f64(one_minus_b2);
  const float64x2_t bc1 = vdupq_n_f64(c.bias_correction1);
  const float64x2_t bc2 = vdupq_n_f64(c.bias_correction2);
  const float64x2_t lr = vdupq_n_f64(c.lr);
  const float64x2_t eps = vdupq_n_f64(c.eps);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t gi = vld1q_f64(g + i);
    const float64x2_t mi = vaddq_f64(vmulq_f64(b1, vld1q_f64(m + i)), vmulq_f64(omb1, gi));
    const float64x2_t vi =
        vaddq_f64(vmulq_f64(b2, vld1q_f64(v + i)), vmulq_f64(omb2, vmulq_f64(gi, gi)));
    vst1q_f64(m + i, mi);
    vst1q_f64(v + i, vi);
    const float64x2_t m_hat = vdivq_f64(mi, bc1);
    const float64x2_t v_hat = vdivq_f64(vi, bc2);
    const float64x2_t step =
        vdivq_f64(vmulq_f64(lr, m_hat), vaddq_f64(vsqrtq_f64(v_hat), eps));
    vst1q_f64(p + i, vsubq_f64(vld1q_f64(p + i), step));
  }
  for (; i < n; ++i) {
    m[i] = c.beta1 * m[i] + one_minus_b1 * g[i];
    v[i] = c.beta2 * v[i] + one_minus_b2 * (g[i] * g[i]);
    const double m_hat = m[i] / c.bias_correction1;
    const double v_hat = v[i] / c.bias_correction2;
    p[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
  }
}

}  // namespace

extern const KernelTable table;
const KernelTable table{Isa::neon, dot, axpy, gemv, gemv_t, rank1_update, adam_update};

}  // namespace kanbench::kernels::neon
