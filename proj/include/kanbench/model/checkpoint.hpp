#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "kanbench/model/model.hpp"

namespace kanbench {

/// Checkpoints are line-oriented text. Every real is written as a C99
/// hexadecimal float, so a save/load round trip is bit-exact.
///
///   kanbench-checkpoint 1
///   model kan|mlp
///   layers <count>
///   kan:  layer <in> <out>
///         edge <w_b> <w_s> <lo> <hi> <intervals> <degree> <coef...>   (out*in lines, row-major)
///   mlp:  layer <in> <out> <activation>
///         weights <out*in values, row-major>
///         bias <out values>
///   end
inline constexpr int kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void save_checkpoint(const Model& model, std::ostream& out);
Model load_checkpoint(std::istream& in);

void save_checkpoint_file(const Model& model, const std::string& path);
Model load_checkpoint_file(const std::string& path);

}  // namespace kanbench
