#include "kanbench/train/fit.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "kanbench/numeric/rng.hpp"
#include "kanbench/train/adam.hpp"
#include "kanbench/train/losses.hpp"

namespace kanbench {
namespace {

constexpr std::uint64_t kShuffleStream = 0x5348554646;  // "SHUFF"

struct LossAndGrad {
  double loss;
  std::vector<double> grad;
};

LossAndGrad sample_loss(std::span<const double> y, const SampleSet& s, std::size_t i,
                        LossKind kind) {
  if (kind == LossKind::cross_entropy) {
    auto ce = cross_entropy_softmax(y, s.labels[i]);
    return {ce.loss, std::move(ce.grad)};
  }
  const auto t = s.targets.row(i);
  LossAndGrad out{0.0, std::vector<double>(y.size())};
  const double inv = 1.0 / static_cast<double>(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double d = y[j] - t[j];
    out.loss += d * d * inv;
    out.grad[j] = 2.0 * d * inv;
  }
  return out;
}

void check_samples(const Model& model, const SampleSet& s, LossKind kind, const char* which) {
  const auto [in_dim, out_dim] = std::visit(
      [](const auto& n) { return std::pair{n.input_dim(), n.output_dim()}; }, model);
  if (s.size() == 0) throw std::invalid_argument(std::string("fit: empty ") + which + " set");
  if (s.inputs.cols() != in_dim) {
    throw std::invalid_argument(std::string("fit: ") + which + " inputs do not match model input dim");
  }
  if (kind == LossKind::mse) {
    if (s.targets.rows() != s.size() || s.targets.cols() != out_dim) {
      throw std::invalid_argument(std::string("fit: ") + which + " targets do not match model output");
    }
  } else if (s.labels.size() != s.size()) {
    throw std::invalid_argument(std::string("fit: ") + which + " labels missing");
  }
}

// Moves Adam moments of widened edges onto their new coefficient slots.
// Keep-spacing widening prepends whole knot spans, so old coefficient i
// becomes new coefficient i + shift; any other grid change zeroes them.
std::vector<double> remap_moments(const std::vector<KnotGrid>& before, const KanNetwork& after,
                                  std::span<const double> old_moments) {
  std::vector<double> out(after.parameter_count(), 0.0);
  std::size_t src = 0;
  std::size_t dst = 0;
  std::size_t e = 0;
  for (const auto& layer : after.layers()) {
    for (const auto& edge : layer.edges()) {
      const KnotGrid& old_grid = before[e++];
      const KnotGrid& new_grid = edge.spline.grid();
      const std::size_t old_n = old_grid.basis_count();
      const std::size_t new_n = new_grid.basis_count();
      out[dst] = old_moments[src];
      out[dst + 1] = old_moments[src + 1];
      const double h = old_grid.spacing();
      if (std::abs(new_grid.spacing() - h) <= 1e-12 * h && new_grid.degree() == old_grid.degree()) {
        const auto shift =
            static_cast<std::ptrdiff_t>(std::llround((old_grid.lo() - new_grid.lo()) / h));
        for (std::size_t i = 0; i < old_n; ++i) {
          const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + shift;
          if (j >= 0 && j < static_cast<std::ptrdiff_t>(new_n)) {
            out[dst + 2 + static_cast<std::size_t>(j)] = old_moments[src + 2 + i];
          }
        }
      }
      src += 2 + old_n;
      dst += 2 + new_n;
    }
  }
  return out;
}

template <typename Net>
auto forward(const Net& net, std::span<const double> x) {
  if constexpr (std::is_same_v<Net, KanNetwork>) {
    return kan_forward(net, x);
  } else {
    return mlp_forward(net, x);
  }
}

template <typename Net, typename Cache>
std::vector<double> backward_params(const Net& net, const Cache& cache, std::span<const double> dy) {
  if constexpr (std::is_same_v<Net, KanNetwork>) {
    return kan_backward(net, cache, dy).params;
  } else {
    return mlp_backward(net, cache, dy).params;
  }
}

template <typename Net>
FitResult fit_impl(Net& net, Model& model_ref, const SampleSet& train, const SampleSet* test,
                   const TrainConfig& cfg) {
  constexpr bool is_kan = std::is_same_v<Net, KanNetwork>;
  FitResult result;
  result.initial_train_loss = evaluate_loss(model_ref, train, cfg.loss);

  const std::size_t n = train.size();
  const std::size_t batch = (cfg.batch_size == 0 || cfg.batch_size >= n) ? n : cfg.batch_size;
  Rng shuffle_rng = Rng(cfg.seed).derive(kShuffleStream);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  AdamState adam(net.parameter_count());
  std::vector<double> params = net.parameters();
  std::vector<double> grad(params.size());
  double lr = cfg.lr;
  const bool track_ranges = is_kan && cfg.grid_update && cfg.lr > 0.0;
  std::vector<KanCache> epoch_caches;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (batch < n) shuffle_rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    if constexpr (is_kan) {
      if (track_ranges) {
        epoch_caches.clear();
        epoch_caches.reserve(n);
      }
    }

    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      const double inv_batch = 1.0 / static_cast<double>(stop - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t b = start; b < stop; ++b) {
        const std::size_t i = order[b];
        auto [y, cache] = forward(net, train.inputs.row(i));
        const LossAndGrad lg = sample_loss(y, train, i, cfg.loss);
        if (!std::isfinite(lg.loss)) {
          throw DivergenceError("fit: non-finite loss at epoch " + std::to_string(epoch));
        }
        loss_sum += lg.loss;
        const auto g = backward_params(net, cache, lg.grad);
        for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += g[j] * inv_batch;
        if constexpr (is_kan) {
          if (track_ranges) epoch_caches.push_back(std::move(cache));
        }
      }
      try {
        adam_step(params, grad, adam, lr);
      } catch (const std::domain_error& ex) {
        throw DivergenceError(std::string("fit: ") + ex.what() + " at epoch " +
                              std::to_string(epoch));
      }
      net.set_parameters(params);
    }

    if constexpr (is_kan) {
      if (track_ranges) {
        std::vector<KnotGrid> before;
        for (const auto& layer : net.layers()) {
          for (const auto& e : layer.edges()) before.push_back(e.spline.grid());
        }
        const std::size_t widened = detect_and_extend(net, epoch_caches);
        if (widened > 0) {
          result.grid_extensions += widened;
          adam.m = remap_moments(before, net, adam.m);
          adam.v = remap_moments(before, net, adam.v);
          params = net.parameters();
          grad.assign(params.size(), 0.0);
        }
      }
    }

    EpochRecord rec{epoch, loss_sum / static_cast<double>(n),
                    std::numeric_limits<double>::quiet_NaN(), lr};
    if (test != nullptr) rec.test_loss = evaluate_loss(model_ref, *test, cfg.loss);
    result.history.push_back(rec);
    result.epochs_run = epoch;
    lr *= cfg.lr_decay;
  }

  result.final_train_loss = evaluate_loss(model_ref, train, cfg.loss);
  if (test != nullptr) result.final_test_loss = evaluate_loss(model_ref, *test, cfg.loss);
  if (!std::isfinite(result.final_train_loss)) throw DivergenceError("fit: non-finite final loss");
  return result;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw std::invalid_argument("TrainConfig: lr must be >= 0");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) {
    throw std::invalid_argument("TrainConfig: lr_decay must be in (0, 1]");
  }
}

double evaluate_loss(const Model& model, const SampleSet& samples, LossKind loss) {
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto y = predict(model, samples.inputs.row(i));
    total += sample_loss(y, samples, i, loss).loss;
  }
  return total / static_cast<double>(samples.size());
}

FitResult fit(Model& model, const SampleSet& train, const SampleSet* test, const TrainConfig& cfg) {
  cfg.validate();
  check_samples(model, train, cfg.loss, "train");
  if (test != nullptr) check_samples(model, *test, cfg.loss, "test");
  return std::visit([&](auto& net) { return fit_impl(net, model, train, test, cfg); }, model);
}

void write_loss_csv(const FitResult& result, std::ostream& out) {
  out << "epoch,train_loss,test_loss,lr\n";
  char buf[128];
  for (const auto& r : result.history) {
    if (std::isnan(r.test_loss)) {
      std::snprintf(buf, sizeof buf, "%zu,%.10g,,%.10g\n", r.epoch, r.train_loss, r.lr);
    } else {
      std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%.10g\n", r.epoch, r.train_loss, r.test_loss, r.lr);
    }
    out << buf;
  }
}

}  // namespace kanbench
