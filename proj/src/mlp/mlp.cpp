#include "kanbench/mlp/mlp.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kanbench/kan/kan.hpp"
#include "kanbench/numeric/kernels.hpp"
#include "kanbench/numeric/linalg.hpp"

namespace kanbench {
namespace {

std::uint64_t fresh_revision() noexcept {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

}  // namespace

std::string_view to_string(Activation a) noexcept {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::silu: return "silu";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  return "identity";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "silu") return Activation::silu;
  if (name == "tanh") return Activation::tanh;
  if (name == "identity" || name == "linear") return Activation::identity;
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

double activate(Activation a, double x) noexcept {
  switch (a) {
    case Activation::relu: return x > 0 ? x : 0.0;
    case Activation::silu: return silu(x);
    case Activation::tanh: return std::tanh(x);
    case Activation::identity: return x;
  }
  return x;
}

double activate_derivative(Activation a, double x) noexcept {
  switch (a) {
    case Activation::relu: return x > 0 ? 1.0 : 0.0;
    case Activation::silu: return silu_derivative(x);
    case Activation::tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Activation::identity: return 1.0;
  }
  return 1.0;
}

MlpNetwork::MlpNetwork(std::vector<DenseLayer> layers)
    : layers_(std::move(layers)), revision_(fresh_revision()) {
  if (layers_.empty()) throw std::invalid_argument("MlpNetwork: needs at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.in_dim() == 0 || layer.out_dim() == 0) {
      throw std::invalid_argument("MlpNetwork: zero-width layer");
    }
    if (layer.bias.size() != layer.out_dim()) {
      throw std::invalid_argument("MlpNetwork: bias length != output dim");
    }
    if (l > 0 && layer.in_dim() != layers_[l - 1].out_dim()) {
      throw std::invalid_argument("MlpNetwork: layer " + std::to_string(l) +
                                  " input dim does not match previous output dim");
    }
  }
}

std::vector<std::size_t> MlpNetwork::architecture() const {
  std::vector<std::size_t> arch{input_dim()};
  for (const auto& layer : layers_) arch.push_back(layer.out_dim());
  return arch;
}

DenseLayer& MlpNetwork::layer_mut(std::size_t l) {
  revision_ = fresh_revision();
  return layers_.at(l);
}

std::size_t MlpNetwork::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.parameter_count();
  return n;
}

std::vector<double> MlpNetwork::parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto& layer : layers_) {
    const auto w = layer.weights.data();
    out.insert(out.end(), w.begin(), w.end());
    out.insert(out.end(), layer.bias.begin(), layer.bias.end());
  }
  return out;
}

void MlpNetwork::set_parameters(std::span<const double> params) {
  if (params.size() != parameter_count()) {
    throw std::invalid_argument("MlpNetwork::set_parameters: size mismatch");
  }
  std::size_t i = 0;
  for (auto& layer : layers_) {
    for (auto& w : layer.weights.data()) w = params[i++];
    for (auto& b : layer.bias) b = params[i++];
  }
  revision_ = fresh_revision();
}

MlpNetwork init_mlp(std::span<const std::size_t> arch, Activation hidden, Rng& rng) {
  if (arch.size() < 2) throw std::invalid_argument("init_mlp: architecture needs >= 2 dims");
  for (auto d : arch) {
    if (d == 0) throw std::invalid_argument("init_mlp: zero-width layer");
  }
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < arch.size(); ++l) {
    const std::size_t n = arch[l];
    const std::size_t m = arch[l + 1];
    DenseLayer layer;
    layer.weights = Matrix(m, n, xavier_init(rng, n, m, n * m));
    layer.bias.assign(m, 0.0);
    layer.activation = (l + 2 == arch.size()) ? Activation::identity : hidden;
    layers.push_back(std::move(layer));
  }
  return MlpNetwork(std::move(layers));
}

std::pair<std::vector<double>, MlpCache> mlp_forward(const MlpNetwork& net,
                                                     std::span<const double> x) {
  if (x.size() != net.input_dim()) {
    throw std::invalid_argument("mlp_forward: input has " + std::to_string(x.size()) +
                                " values, network expects " + std::to_string(net.input_dim()));
  }
  const auto& k = kernels::active();
  MlpCache cache;
  cache.revision = net.revision();
  std::vector<double> h(x.begin(), x.end());
  for (const auto& layer : net.layers()) {
    std::vector<double> z = layer.bias;
    k.gemv(layer.weights.data().data(), layer.out_dim(), layer.in_dim(), h.data(), z.data());
    std::vector<double> a(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) a[i] = activate(layer.activation, z[i]);
    cache.layer_inputs.push_back(std::move(h));
    cache.pre_activations.push_back(std::move(z));
    h = std::move(a);
  }
  return {std::move(h), std::move(cache)};
}

std::vector<double> mlp_predict(const MlpNetwork& net, std::span<const double> x) {
  return mlp_forward(net, x).first;
}

MlpGradient mlp_backward(const MlpNetwork& net, const MlpCache& cache,
                         std::span<const double> dloss_dy) {
  if (cache.revision != net.revision() || cache.layer_inputs.size() != net.layers().size()) {
    throw StaleCacheError("mlp_backward: cache does not belong to this network state");
  }
  if (dloss_dy.size() != net.output_dim()) {
    throw std::invalid_argument("mlp_backward: upstream gradient dimension mismatch");
  }
  const auto& k = kernels::active();
  MlpGradient grad;
  grad.params.assign(net.parameter_count(), 0.0);

  std::vector<std::size_t> offsets;
  std::size_t off = 0;
  for (const auto& layer : net.layers()) {
    offsets.push_back(off);
    off += layer.parameter_count();
  }

  std::vector<double> upstream(dloss_dy.begin(), dloss_dy.end());
  for (std::size_t l = net.layers().size(); l-- > 0;) {
    const DenseLayer& layer = net.layers()[l];
    const auto& z = cache.pre_activations[l];
    const auto& x = cache.layer_inputs[l];
    std::vector<double> delta(layer.out_dim());
    for (std::size_t i = 0; i < delta.size(); ++i) {
      delta[i] = upstream[i] * activate_derivative(layer.activation, z[i]);
    }
    double* dw = grad.params.data() + offsets[l];
    k.rank1_update(1.0, delta.data(), layer.out_dim(), x.data(), layer.in_dim(), dw);
    double* db = dw + layer.weights.size();
    for (std::size_t i = 0; i < delta.size(); ++i) db[i] = delta[i];

    std::vector<double> downstream(layer.in_dim(), 0.0);
    k.gemv_t(layer.weights.data().data(), layer.out_dim(), layer.in_dim(), delta.data(),
             downstream.data());
    upstream = std::move(downstream);
  }
  grad.input = std::move(upstream);
  return grad;
}

}  // namespace kanbench
