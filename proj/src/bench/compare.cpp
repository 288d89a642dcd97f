#include "kanbench/bench/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

namespace kanbench {
namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

int metric_decimals(const std::string& metric) { return metric == "mse" ? 4 : 2; }

// Every rendered cell, computed once so both renderings agree.
std::vector<std::vector<std::string>> cells(std::span<const TaskComparison> rows) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) {
    const int d = metric_decimals(r.metric_name);
    out.push_back({r.task, r.metric_name, fixed(r.kan_kflops, 3), fixed(r.kan_metric, d),
                   fixed(r.mlp_kflops, 3), fixed(r.mlp_metric, d), fixed(r.flops_difference, 2),
                   fixed(r.metric_difference, 2)});
  }
  return out;
}

const std::vector<std::string> kHeader{"task",       "metric",     "kan_kflops",
                                       "kan_metric", "mlp_kflops", "mlp_metric",
                                       "flops_diff_pct", "metric_diff_pct"};

}  // namespace

double percentage_difference(double kan, double mlp, Direction direction) {
  if (mlp == 0.0) throw std::invalid_argument("percentage_difference: mlp value is zero");
  const double raw = direction == Direction::lower_better ? 100.0 * (mlp - kan) / mlp
                                                          : 100.0 * (kan - mlp) / mlp;
  return std::round(raw * 100.0) / 100.0;
}

TaskComparison compare(const std::string& task, const std::string& metric_name, double kan_kflops,
                       double kan_metric, double mlp_kflops, double mlp_metric) {
  TaskComparison c{task, metric_name, kan_kflops, kan_metric, mlp_kflops, mlp_metric, 0.0, 0.0};
  c.flops_difference = percentage_difference(kan_kflops, mlp_kflops, Direction::lower_better);
  c.metric_difference = percentage_difference(
      kan_metric, mlp_metric,
      metric_name == "accuracy" ? Direction::higher_better : Direction::lower_better);
  return c;
}

TaskComparison compare(const RunReport& kan, const RunReport& mlp) {
  if (kan.task != mlp.task) throw std::invalid_argument("compare: reports are for different tasks");
  if (kan.model != ModelKind::kan || mlp.model != ModelKind::mlp) {
    throw std::invalid_argument("compare: expected one kan and one mlp report");
  }
  if (kan.metric_name != mlp.metric_name) throw std::invalid_argument("compare: metric kinds differ");
  return compare(std::string(to_string(kan.task)), kan.metric_name, kan.kflops, kan.metric,
                 mlp.kflops, mlp.metric);
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: no values");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<TaskComparison> compare(std::span<const RunReport> reports) {
  struct Group {
    std::vector<double> metric;
    std::vector<double> kflops;
    std::string metric_name;
  };
  std::map<Task, std::map<ModelKind, Group>> groups;
  for (const auto& r : reports) {
    if (!r.ok()) continue;
    Group& g = groups[r.task][r.model];
    if (!g.metric_name.empty() && g.metric_name != r.metric_name) {
      throw std::invalid_argument("compare: mixed metric kinds within one task");
    }
    g.metric_name = r.metric_name;
    g.metric.push_back(r.metric);
    g.kflops.push_back(r.kflops);
  }
  std::vector<TaskComparison> rows;
  for (const auto& [task, by_model] : groups) {
    const auto kan = by_model.find(ModelKind::kan);
    const auto mlp = by_model.find(ModelKind::mlp);
    if (kan == by_model.end() || mlp == by_model.end()) {
      throw std::invalid_argument("compare: task " + std::string(to_string(task)) +
                                  " lacks a kan or mlp report");
    }
    if (kan->second.metric_name != mlp->second.metric_name) {
      throw std::invalid_argument("compare: metric kinds differ for task " + std::string(to_string(task)));
    }
    rows.push_back(compare(std::string(to_string(task)), kan->second.metric_name,
                           median(kan->second.kflops), median(kan->second.metric),
                           median(mlp->second.kflops), median(mlp->second.metric)));
  }
  return rows;
}

void render_markdown(std::span<const TaskComparison> rows, std::ostream& out) {
  out << '|';
  for (const auto& h : kHeader) out << ' ' << h << " |";
  out << "\n|";
  for (std::size_t i = 0; i < kHeader.size(); ++i) out << (i < 2 ? "---|" : "---:|");
  out << '\n';
  for (const auto& row : cells(rows)) {
    out << '|';
    for (const auto& c : row) out << ' ' << c << " |";
    out << '\n';
  }
}

void render_csv(std::span<const TaskComparison> rows, std::ostream& out) {
  for (std::size_t i = 0; i < kHeader.size(); ++i) out << (i ? "," : "") << kHeader[i];
  out << '\n';
  for (const auto& row : cells(rows)) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

}  // namespace kanbench
