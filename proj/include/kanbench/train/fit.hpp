#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kanbench/model/model.hpp"
#include "kanbench/numeric/matrix.hpp"

namespace kanbench {

enum class LossKind { mse, cross_entropy };

struct TrainConfig {
  std::size_t epochs = 1000;
  /// 0 or >= sample count means full batch.
  std::size_t batch_size = 0;
  double lr = 0.01;
  double lr_decay = 0.999;
  std::uint64_t seed = 0;
  bool grid_update = false;
  LossKind loss = LossKind::mse;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// Supervised samples in model units. Regression uses `targets`
/// (rows x output_dim); classification uses `labels`.
struct SampleSet {
  Matrix inputs;
  Matrix targets;
  std::vector<std::size_t> labels;

  std::size_t size() const noexcept { return inputs.rows(); }
};

struct EpochRecord {
  std::size_t epoch;
  double train_loss;
  double test_loss;  // NaN without a test set
  double lr;
};

struct FitResult {
  double initial_train_loss = 0.0;
  double final_train_loss = 0.0;
  std::optional<double> final_test_loss;
  std::size_t epochs_run = 0;
  std::size_t grid_extensions = 0;
  std::vector<EpochRecord> history;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mean loss of `model` over `samples`.
double evaluate_loss(const Model& model, const SampleSet& samples, LossKind loss);

/// Mini-batch Adam with per-epoch exponential learning-rate decay. Batches
/// are reshuffled every epoch from a stream derived from cfg.seed. For a KAN
/// with cfg.grid_update, grids are checked against the epoch's recorded
/// inputs once per epoch and widened where needed; Adam moments follow the
/// coefficients they belong to. Throws DivergenceError on a non-finite loss
/// or gradient.
FitResult fit(Model& model, const SampleSet& train, const SampleSet* test, const TrainConfig& cfg);

/// CSV with header epoch,train_loss,test_loss,lr.
void write_loss_csv(const FitResult& result, std::ostream& out);

}  // namespace kanbench
