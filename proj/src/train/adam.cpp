#include "kanbench/train/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kanbench/numeric/kernels.hpp"

namespace kanbench {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr) {
  if (params.size() != grads.size() || params.size() != state.m.size() ||
      params.size() != state.v.size()) {
    throw std::invalid_argument("adam_step: parameter/gradient/state sizes differ");
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw std::domain_error("adam_step: non-finite gradient at index " + std::to_string(i));
    }
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const kernels::AdamCoefficients c{AdamState::beta1,
                                    AdamState::beta2,
                                    lr,
                                    AdamState::eps,
                                    1.0 - std::pow(AdamState::beta1, t),
                                    1.0 - std::pow(AdamState::beta2, t)};
  kernels::active().adam_update(params.data(), grads.data(), state.m.data(), state.v.data(),
                                params.size(), c);
}

}  // namespace kanbench
