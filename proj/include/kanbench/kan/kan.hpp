#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kanbench/numeric/rng.hpp"
#include "kanbench/spline/spline.hpp"

namespace kanbench {

double silu(double x) noexcept;
/// d/dx silu(x) = s(x) * (1 + x * (1 - s(x))), s the logistic function.
double silu_derivative(double x) noexcept;

/// phi(x) = w_b * silu(x) + w_s * spline(x)
struct EdgeActivation {
  double w_b = 0.0;
  double w_s = 1.0;
  SplineFunction spline;

  double operator()(double x) const noexcept { return w_b * silu(x) + w_s * spline(x); }
  std::size_t parameter_count() const noexcept { return 2 + spline.coefficients().size(); }

  bool operator==(const EdgeActivation&) const = default;
};

/// Output q is the sum over inputs p of phi_{q,p}(x_p).
class KanLayer {
 public:
  KanLayer(std::size_t in_dim, std::size_t out_dim, std::vector<EdgeActivation> edges);

  std::size_t in_dim() const noexcept { return in_dim_; }
  std::size_t out_dim() const noexcept { return out_dim_; }

  const EdgeActivation& edge(std::size_t q, std::size_t p) const { return edges_[q * in_dim_ + p]; }
  EdgeActivation& edge(std::size_t q, std::size_t p) { return edges_[q * in_dim_ + p]; }
  std::span<const EdgeActivation> edges() const noexcept { return edges_; }

  std::vector<double> forward(std::span<const double> x) const;
  std::size_t parameter_count() const noexcept;

  bool operator==(const KanLayer&) const = default;

 private:
  std::size_t in_dim_;
  std::size_t out_dim_;
  std::vector<EdgeActivation> edges_;  // row q, column p
};

/// Per-sample record of every layer's input, kept for the backward pass and
/// for out-of-range detection. Tagged with the network revision it came from;
/// revisions are process-unique and change on every parameter mutation.
struct KanCache {
  std::vector<std::vector<double>> layer_inputs;
  std::uint64_t revision = 0;
};

struct KanGradient {
  /// Same layout as KanNetwork::parameters().
  std::vector<double> params;
  std::vector<double> input;
};

class StaleCacheError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class KanNetwork {
 public:
  explicit KanNetwork(std::vector<KanLayer> layers);

  std::size_t input_dim() const noexcept { return layers_.front().in_dim(); }
  std::size_t output_dim() const noexcept { return layers_.back().out_dim(); }
  std::vector<std::size_t> architecture() const;

  std::span<const KanLayer> layers() const noexcept { return layers_; }
  const KanLayer& layer(std::size_t l) const { return layers_.at(l); }

  /// Mutable edge access. Invalidates caches from earlier forward passes.
  EdgeActivation& edge_mut(std::size_t l, std::size_t q, std::size_t p);

  /// Flat parameter vector: for each layer, for each edge in row-major
  /// (q, p) order, w_b then w_s then the spline coefficients.
  std::size_t parameter_count() const noexcept;
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> params);

  std::uint64_t revision() const noexcept { return revision_; }

  bool operator==(const KanNetwork& other) const { return layers_ == other.layers_; }

 private:
  std::vector<KanLayer> layers_;
  std::uint64_t revision_;
};

/// Every edge starts with w_s = 1, spline coefficients uniform with standard
/// deviation 0.1 / sqrt(G + k) (so spline(x) ~ 0), and w_b Xavier-uniform
/// with fans (in_dim, out_dim) of its layer.
KanNetwork init_kan(std::span<const std::size_t> arch, int intervals, int degree, double lo,
                    double hi, Rng& rng);

double kan_init_coefficient_scale(int intervals, int degree) noexcept;

std::pair<std::vector<double>, KanCache> kan_forward(const KanNetwork& net,
                                                     std::span<const double> x);

/// Output only; skips the cache.
std::vector<double> kan_predict(const KanNetwork& net, std::span<const double> x);

KanGradient kan_backward(const KanNetwork& net, const KanCache& cache,
                         std::span<const double> dloss_dy);

struct GridUpdateOptions {
  /// Fraction of the widened range added beyond the observed extremes.
  double margin = 0.05;
  WidenPolicy policy = WidenPolicy::keep_spacing;
};

/// Widens every edge whose recorded inputs leave its grid range and refits
/// the spline on the recorded inputs plus a uniform sweep of the new range.
/// Returns the number of edges widened. Grids never shrink.
std::size_t detect_and_extend(KanNetwork& net, std::span<const KanCache> caches,
                              const GridUpdateOptions& options = {});

inline std::size_t detect_and_extend(KanNetwork& net, const KanCache& cache,
                                     const GridUpdateOptions& options = {}) {
  return detect_and_extend(net, std::span<const KanCache>(&cache, 1), options);
}

}  // namespace kanbench
