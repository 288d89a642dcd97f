#pragma once

// Dense inner-loop kernels with a scalar reference implementation and
// SIMD variants chosen once at runtime from the host CPU.
//
// Elementwise kernels (axpy, gemv_t, rank1_update, adam_update) evaluate the
// same expression tree in every variant and are bit-identical to the scalar
// path. Reductions (dot, gemv) reassociate and agree to rounding only.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace kanbench::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

struct AdamCoefficients {
  double beta1;
  double beta2;
  double lr;
  double eps;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y += A x, A row-major rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // y += A^T x
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // A += alpha * u v^T
  void (*rank1_update)(double alpha, const double* u, std::size_t rows, const double* v,
                       std::size_t cols, double* a);
  void (*adam_update)(double* params, const double* grads, double* m, double* v, std::size_t n,
                      const AdamCoefficients& c);
};

/// Variant used by the library. Honors KANBENCH_SIMD=scalar|avx2|neon when
/// the requested variant is supported; otherwise picks the widest available.
const KernelTable& active();

/// Table for `isa` if it was compiled in and the CPU supports it.
const KernelTable* table_for(Isa isa);

/// All variants usable on this machine, scalar first.
std::vector<Isa> available();

namespace scalar {
extern const KernelTable table;
}

// Span conveniences over the active table.
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace kanbench::kernels
