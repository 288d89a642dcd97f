#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kanbench {

struct AdamState {
  static constexpr double beta1 = 0.9;
  static constexpr double beta2 = 0.999;
  static constexpr double eps = 1e-8;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}

  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
};

/// One bias-corrected Adam update in place. Throws std::domain_error on a
/// non-finite gradient entry and std::invalid_argument on shape mismatch.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr);

}  // namespace kanbench
