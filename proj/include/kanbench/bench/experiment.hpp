#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kanbench/bench/config.hpp"
#include "kanbench/model/model.hpp"
#include "kanbench/train/fit.hpp"

namespace kanbench {

inline constexpr int kReportSchemaVersion = 1;

/// Metrics of one run. Regression metrics are MSE in the task's raw units;
/// classification metrics are accuracy in percent.
struct RunReport {
  int schema_version = kReportSchemaVersion;
  std::vector<std::pair<std::string, std::string>> config;
  std::string name;
  Task task = Task::square;
  ModelKind model = ModelKind::kan;
  std::uint64_t seed = 0;
  std::string status = "ok";  // ok | diverged
  std::string diagnostics;
  /// "mse" or "accuracy"; `metric` is the held-out value of that kind.
  std::string metric_name;
  double metric = 0.0;
  std::optional<double> train_mse;
  std::optional<double> test_mse;
  std::optional<double> train_accuracy;
  std::optional<double> test_accuracy;
  std::int64_t flops = 0;
  double kflops = 0.0;
  std::size_t parameter_count = 0;
  std::size_t epochs_run = 0;
  std::size_t grid_extensions = 0;
  double initial_train_loss = 0.0;
  double final_train_loss = 0.0;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;

  bool ok() const noexcept { return status == "ok"; }
};

struct ExperimentOutcome {
  RunReport report;
  std::optional<Model> model;
  FitResult fit;
};

enum class EvalSplit {
  /// Train on the training split, report on the held-out split.
  test,
  /// Carve a further dev split out of the training split and report on it;
  /// used by sweeps so the test split stays untouched.
  dev,
};

/// Builds the dataset, splits it (random for square/cube, chronological for
/// temperature, stratified for wine), initializes and fits the model and
/// attaches its analytic cost. Divergence is reported through
/// `report.status` rather than thrown; data and config errors propagate.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, EvalSplit eval = EvalSplit::test);

/// Builds the untrained model a config describes (seeded from cfg.train.seed).
Model build_model(const ExperimentConfig& cfg);

}  // namespace kanbench
