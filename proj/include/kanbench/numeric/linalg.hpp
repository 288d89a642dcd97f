#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "kanbench/numeric/matrix.hpp"
#include "kanbench/numeric/rng.hpp"

namespace kanbench {

/// Raised when a least-squares system is numerically rank deficient.
class DegenerateSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves min ||A x - b||_2 by Householder QR.
///
/// Requires rows >= cols. A column whose reduced pivot falls below
/// max(m, n) * eps * max|R_jj| is treated as dependent and the call throws
/// DegenerateSystemError instead of returning an arbitrary minimizer.
std::vector<double> least_squares(const Matrix& a, std::span<const double> b);

/// Xavier/Glorot uniform draws on [-sqrt(6/(fan_in+fan_out)), +sqrt(...)].
std::vector<double> xavier_init(Rng& rng, std::size_t fan_in, std::size_t fan_out,
                                std::size_t n);

}  // namespace kanbench
