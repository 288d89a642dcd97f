#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace kanbench {

/// xoshiro256** seeded through splitmix64.
///
/// The whole state is four 64-bit words and every derived draw uses only
/// integer arithmetic plus exact power-of-two scaling, so a given seed yields
/// the same stream on every platform and compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept;

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;

  /// Uniform integer on [0, bound), unbiased. `bound` must be nonzero.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Independent generator for a named sub-stream of the same seed.
  Rng derive(std::uint64_t stream) const noexcept;

  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace kanbench
