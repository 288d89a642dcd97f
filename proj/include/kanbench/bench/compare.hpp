#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kanbench/bench/experiment.hpp"

namespace kanbench {

enum class Direction { lower_better, higher_better };

/// Relative advantage of `kan` over `mlp` in percent, rounded half away
/// from zero to 2 decimals:
///   lower_better:  100 (mlp - kan) / mlp
///   higher_better: 100 (kan - mlp) / mlp
/// Throws std::invalid_argument when mlp == 0.
double percentage_difference(double kan, double mlp, Direction direction);

/// One row of the KAN vs MLP comparison.
struct TaskComparison {
  std::string task;
  std::string metric_name;  // mse | accuracy
  double kan_kflops = 0.0;
  double kan_metric = 0.0;
  double mlp_kflops = 0.0;
  double mlp_metric = 0.0;
  double flops_difference = 0.0;
  double metric_difference = 0.0;
};

TaskComparison compare(const std::string& task, const std::string& metric_name, double kan_kflops,
                       double kan_metric, double mlp_kflops, double mlp_metric);

/// Pairs one KAN and one MLP report of the same task.
TaskComparison compare(const RunReport& kan, const RunReport& mlp);

/// Groups successful reports by task, takes the per-model median of metric
/// and kFLOPs across seeds, then compares. Tasks lacking either model, or
/// whose metric kinds disagree, raise std::invalid_argument.
std::vector<TaskComparison> compare(std::span<const RunReport> reports);

double median(std::vector<double> values);

/// kFLOPs with 3 decimals, MSE with 4, accuracy and percentages with 2.
void render_markdown(std::span<const TaskComparison> rows, std::ostream& out);
void render_csv(std::span<const TaskComparison> rows, std::ostream& out);

}  // namespace kanbench
