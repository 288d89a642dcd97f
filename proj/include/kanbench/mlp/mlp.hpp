#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "kanbench/numeric/matrix.hpp"
#include "kanbench/numeric/rng.hpp"

namespace kanbench {

enum class Activation { relu, silu, tanh, identity };

std::string_view to_string(Activation a) noexcept;
/// Throws std::invalid_argument on an unknown name.
Activation parse_activation(std::string_view name);

double activate(Activation a, double x) noexcept;
double activate_derivative(Activation a, double x) noexcept;

struct DenseLayer {
  Matrix weights;  // out x in
  std::vector<double> bias;
  Activation activation = Activation::identity;

  std::size_t in_dim() const noexcept { return weights.cols(); }
  std::size_t out_dim() const noexcept { return weights.rows(); }
  std::size_t parameter_count() const noexcept { return weights.size() + bias.size(); }

  bool operator==(const DenseLayer&) const = default;
};

struct MlpCache {
  std::vector<std::vector<double>> layer_inputs;
  std::vector<std::vector<double>> pre_activations;
  std::uint64_t revision = 0;
};

struct MlpGradient {
  /// Same layout as MlpNetwork::parameters(): per layer, weights row-major
  /// then bias.
  std::vector<double> params;
  std::vector<double> input;
};

class MlpNetwork {
 public:
  explicit MlpNetwork(std::vector<DenseLayer> layers);

  std::size_t input_dim() const noexcept { return layers_.front().in_dim(); }
  std::size_t output_dim() const noexcept { return layers_.back().out_dim(); }
  std::vector<std::size_t> architecture() const;
  Activation hidden_activation() const noexcept { return layers_.front().activation; }

  std::span<const DenseLayer> layers() const noexcept { return layers_; }
  const DenseLayer& layer(std::size_t l) const { return layers_.at(l); }
  DenseLayer& layer_mut(std::size_t l);

  std::size_t parameter_count() const noexcept;
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> params);

  std::uint64_t revision() const noexcept { return revision_; }

  bool operator==(const MlpNetwork& other) const { return layers_ == other.layers_; }

 private:
  std::vector<DenseLayer> layers_;
  std::uint64_t revision_;
};

/// Xavier-uniform weights, zero biases; hidden layers use `hidden`, the
/// output layer is linear.
MlpNetwork init_mlp(std::span<const std::size_t> arch, Activation hidden, Rng& rng);

std::pair<std::vector<double>, MlpCache> mlp_forward(const MlpNetwork& net,
                                                     std::span<const double> x);
std::vector<double> mlp_predict(const MlpNetwork& net, std::span<const double> x);
MlpGradient mlp_backward(const MlpNetwork& net, const MlpCache& cache,
                         std::span<const double> dloss_dy);

}  // namespace kanbench
