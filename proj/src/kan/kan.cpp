#include "kanbench/kan/kan.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "kanbench/numeric/linalg.hpp"

namespace kanbench {
namespace {

std::uint64_t fresh_revision() noexcept {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

double logistic(double x) noexcept {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double silu(double x) noexcept { return x * logistic(x); }

double silu_derivative(double x) noexcept {
  const double s = logistic(x);
  return s * (1.0 + x * (1.0 - s));
}

KanLayer::KanLayer(std::size_t in_dim, std::size_t out_dim, std::vector<EdgeActivation> edges)
    : in_dim_(in_dim), out_dim_(out_dim), edges_(std::move(edges)) {
  if (in_dim_ == 0 || out_dim_ == 0) throw std::invalid_argument("KanLayer: zero dimension");
  if (edges_.size() != in_dim_ * out_dim_) {
    throw std::invalid_argument("KanLayer: edge count != in_dim * out_dim");
  }
  for (const auto& e : edges_) {
    if (!std::isfinite(e.w_b) || !std::isfinite(e.w_s)) {
      throw std::invalid_argument("KanLayer: non-finite edge weight");
    }
  }
}

std::vector<double> KanLayer::forward(std::span<const double> x) const {
  std::vector<double> y(out_dim_, 0.0);
  for (std::size_t q = 0; q < out_dim_; ++q) {
    double acc = 0.0;
    for (std::size_t p = 0; p < in_dim_; ++p) acc += edge(q, p)(x[p]);
    y[q] = acc;
  }
  return y;
}

std::size_t KanLayer::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& e : edges_) n += e.parameter_count();
  return n;
}

KanNetwork::KanNetwork(std::vector<KanLayer> layers)
    : layers_(std::move(layers)), revision_(fresh_revision()) {
  if (layers_.empty()) throw std::invalid_argument("KanNetwork: needs at least one layer");
  for (std::size_t l = 1; l < layers_.size(); ++l) {
    if (layers_[l].in_dim() != layers_[l - 1].out_dim()) {
      throw std::invalid_argument("KanNetwork: layer " + std::to_string(l) +
                                  " input dim does not match previous output dim");
    }
  }
}

std::vector<std::size_t> KanNetwork::architecture() const {
  std::vector<std::size_t> arch{input_dim()};
  for (const auto& layer : layers_) arch.push_back(layer.out_dim());
  return arch;
}

EdgeActivation& KanNetwork::edge_mut(std::size_t l, std::size_t q, std::size_t p) {
  revision_ = fresh_revision();
  return layers_.at(l).edge(q, p);
}

std::size_t KanNetwork::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.parameter_count();
  return n;
}

std::vector<double> KanNetwork::parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto& layer : layers_) {
    for (const auto& e : layer.edges()) {
      out.push_back(e.w_b);
      out.push_back(e.w_s);
      const auto c = e.spline.coefficients();
      out.insert(out.end(), c.begin(), c.end());
    }
  }
  return out;
}

void KanNetwork::set_parameters(std::span<const double> params) {
  if (params.size() != parameter_count()) {
    throw std::invalid_argument("KanNetwork::set_parameters: size mismatch");
  }
  std::size_t i = 0;
  for (auto& layer : layers_) {
    for (std::size_t q = 0; q < layer.out_dim(); ++q) {
      for (std::size_t p = 0; p < layer.in_dim(); ++p) {
        auto& e = layer.edge(q, p);
        e.w_b = params[i++];
        e.w_s = params[i++];
        for (auto& c : e.spline.coefficients()) c = params[i++];
      }
    }
  }
  revision_ = fresh_revision();
}

double kan_init_coefficient_scale(int intervals, int degree) noexcept {
  return 0.1 / std::sqrt(static_cast<double>(intervals + degree));
}

KanNetwork init_kan(std::span<const std::size_t> arch, int intervals, int degree, double lo,
                    double hi, Rng& rng) {
  if (arch.size() < 2) throw std::invalid_argument("init_kan: architecture needs >= 2 dims");
  for (auto d : arch) {
    if (d == 0) throw std::invalid_argument("init_kan: zero-width layer");
  }
  if (degree < 1) throw std::invalid_argument("init_kan: trainable edges need degree >= 1");
  const KnotGrid grid(lo, hi, intervals, degree);
  // Uniform on [-a, a] has standard deviation a / sqrt(3).
  const double half_width = std::sqrt(3.0) * kan_init_coefficient_scale(intervals, degree);

  std::vector<KanLayer> layers;
  for (std::size_t l = 0; l + 1 < arch.size(); ++l) {
    const std::size_t n = arch[l];
    const std::size_t m = arch[l + 1];
    const auto w_b = xavier_init(rng, n, m, n * m);
    std::vector<EdgeActivation> edges;
    edges.reserve(n * m);
    for (std::size_t e = 0; e < n * m; ++e) {
      std::vector<double> coef(grid.basis_count());
      for (auto& c : coef) c = rng.uniform(-half_width, half_width);
      edges.push_back(EdgeActivation{w_b[e], 1.0, SplineFunction(grid, std::move(coef))});
    }
    layers.emplace_back(n, m, std::move(edges));
  }
  return KanNetwork(std::move(layers));
}

std::pair<std::vector<double>, KanCache> kan_forward(const KanNetwork& net,
                                                     std::span<const double> x) {
  if (x.size() != net.input_dim()) {
    throw std::invalid_argument("kan_forward: input has " + std::to_string(x.size()) +
                                " values, network expects " + std::to_string(net.input_dim()));
  }
  KanCache cache;
  cache.revision = net.revision();
  cache.layer_inputs.reserve(net.layers().size());
  std::vector<double> h(x.begin(), x.end());
  for (const auto& layer : net.layers()) {
    std::vector<double> next = layer.forward(h);
    cache.layer_inputs.push_back(std::move(h));
    h = std::move(next);
  }
  return {std::move(h), std::move(cache)};
}

std::vector<double> kan_predict(const KanNetwork& net, std::span<const double> x) {
  if (x.size() != net.input_dim()) throw std::invalid_argument("kan_predict: dimension mismatch");
  std::vector<double> h(x.begin(), x.end());
  for (const auto& layer : net.layers()) h = layer.forward(h);
  return h;
}

KanGradient kan_backward(const KanNetwork& net, const KanCache& cache,
                         std::span<const double> dloss_dy) {
  if (cache.revision != net.revision() || cache.layer_inputs.size() != net.layers().size()) {
    throw StaleCacheError("kan_backward: cache does not belong to this network state");
  }
  if (dloss_dy.size() != net.output_dim()) {
    throw std::invalid_argument("kan_backward: upstream gradient dimension mismatch");
  }

  KanGradient grad;
  grad.params.assign(net.parameter_count(), 0.0);

  // Parameter offset of each layer's first edge.
  std::vector<std::size_t> offsets;
  offsets.reserve(net.layers().size());
  std::size_t off = 0;
  for (const auto& layer : net.layers()) {
    offsets.push_back(off);
    off += layer.parameter_count();
  }

  std::vector<double> upstream(dloss_dy.begin(), dloss_dy.end());
  for (std::size_t l = net.layers().size(); l-- > 0;) {
    const KanLayer& layer = net.layers()[l];
    const auto& x = cache.layer_inputs[l];
    std::vector<double> downstream(layer.in_dim(), 0.0);
    std::size_t idx = offsets[l];
    for (std::size_t q = 0; q < layer.out_dim(); ++q) {
      const double g = upstream[q];
      for (std::size_t p = 0; p < layer.in_dim(); ++p) {
        const EdgeActivation& e = layer.edge(q, p);
        const KnotGrid& grid = e.spline.grid();
        const double xp = x[p];
        const BasisWindow basis = basis_window(grid, xp);
        const auto coef = e.spline.coefficients();
        double spline_value = 0.0;
        for (int r = 0; r < basis.count; ++r) spline_value += coef[basis.first + r] * basis.values[r];

        grad.params[idx] = g * silu(xp);
        grad.params[idx + 1] = g * spline_value;
        double* dc = grad.params.data() + idx + 2;
        for (int r = 0; r < basis.count; ++r) dc[basis.first + r] = g * e.w_s * basis.values[r];

        const BasisWindow dbasis = basis_derivative_window(grid, xp);
        double spline_slope = 0.0;
        for (int r = 0; r < dbasis.count; ++r) spline_slope += coef[dbasis.first + r] * dbasis.values[r];
        downstream[p] += g * (e.w_b * silu_derivative(xp) + e.w_s * spline_slope);

        idx += e.parameter_count();
      }
    }
    upstream = std::move(downstream);
  }
  grad.input = std::move(upstream);
  return grad;
}

}  // namespace kanbench
