#include "kanbench/bench/experiment.hpp"

#include <chrono>

#include "kanbench/data/datasets.hpp"
#include "kanbench/flops/flops.hpp"
#include "kanbench/train/losses.hpp"

namespace kanbench {
namespace {

constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kDevStream = 3;
constexpr double kDevFraction = 0.2;

// Rows of a dataset in model units plus what is needed to score them in
// raw units.
struct Prepared {
  SampleSet all;
  Matrix raw_targets;  // regression only
  Normalizer target_normalizer;
  std::vector<std::string> warnings;
};

Prepared prepare(const ExperimentConfig& cfg) {
  Prepared p;
  if (cfg.task == Task::wine) {
    ClassificationDataset d = load_wine(cfg.data_path);
    p.all.inputs = std::move(d.inputs);
    p.all.labels = std::move(d.labels);
    return p;
  }
  RegressionDataset d = cfg.task == Task::square ? gen_square(cfg.rows)
                        : cfg.task == Task::cube ? gen_cube(cfg.rows)
                                                 : load_temperatures(cfg.data_path, cfg.window);
  p.all.inputs = std::move(d.inputs);
  p.all.targets = std::move(d.targets);
  p.raw_targets = std::move(d.raw_targets);
  p.target_normalizer = std::move(d.target_normalizer);
  p.warnings = std::move(d.warnings);
  return p;
}

SampleSet subset(const SampleSet& s, const std::vector<std::size_t>& rows) {
  SampleSet out;
  out.inputs = select_rows(s.inputs, rows);
  if (!s.targets.empty()) out.targets = select_rows(s.targets, rows);
  for (auto r : rows) {
    if (!s.labels.empty()) out.labels.push_back(s.labels[r]);
  }
  return out;
}

SplitMode split_mode(Task t) {
  switch (t) {
    case Task::temperature: return SplitMode::chronological;
    case Task::wine: return SplitMode::stratified;
    default: return SplitMode::random;
  }
}

double raw_mse(const Model& model, const SampleSet& s, const Matrix& raw_targets,
               const std::vector<std::size_t>& rows, const Normalizer& norm) {
  std::vector<double> pred;
  std::vector<double> truth;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto y = predict(model, s.inputs.row(i));
    pred.push_back(norm.denormalize(0, y[0]));
    truth.push_back(raw_targets(rows[i], 0));
  }
  return mse(pred, truth);
}

double class_accuracy(const Model& model, const SampleSet& s) {
  std::vector<std::size_t> pred;
  for (std::size_t i = 0; i < s.size(); ++i) pred.push_back(argmax(predict(model, s.inputs.row(i))));
  return accuracy(pred, s.labels);
}

}  // namespace

Model build_model(const ExperimentConfig& cfg) {
  Rng rng = Rng(cfg.train.seed).derive(kInitStream);
  if (cfg.model == ModelKind::kan) {
    return init_kan(cfg.arch, cfg.grid, cfg.degree, -1.0, 1.0, rng);
  }
  return init_mlp(cfg.arch, cfg.hidden_activation, rng);
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, EvalSplit eval) {
  const auto started = std::chrono::steady_clock::now();
  ExperimentOutcome out;
  RunReport& r = out.report;
  r.config = cfg.echo();
  r.name = cfg.name;
  r.task = cfg.task;
  r.model = cfg.model;
  r.seed = cfg.train.seed;
  r.metric_name = cfg.is_classification() ? "accuracy" : "mse";

  Prepared data = prepare(cfg);
  r.warnings = data.warnings;
  const std::size_t n = data.all.size();
  Rng split_rng = Rng(cfg.train.seed).derive(kSplitStream);
  const SplitMode mode = split_mode(cfg.task);
  SplitIndices s = split(n, cfg.test_fraction, split_rng, mode, data.all.labels);
  std::vector<std::size_t> train_rows = s.train;
  std::vector<std::size_t> eval_rows = s.test;
  if (eval == EvalSplit::dev) {
    std::vector<std::size_t> train_labels;
    for (auto i : train_rows) {
      if (!data.all.labels.empty()) train_labels.push_back(data.all.labels[i]);
    }
    Rng dev_rng = Rng(cfg.train.seed).derive(kDevStream);
    const SplitIndices inner = split(train_rows.size(), kDevFraction, dev_rng, mode, train_labels);
    std::vector<std::size_t> tr;
    std::vector<std::size_t> dv;
    for (auto i : inner.train) tr.push_back(train_rows[i]);
    for (auto i : inner.test) dv.push_back(train_rows[i]);
    train_rows = std::move(tr);
    eval_rows = std::move(dv);
  }
  const SampleSet train = subset(data.all, train_rows);
  const SampleSet held_out = subset(data.all, eval_rows);

  Model model = build_model(cfg);
  r.parameter_count = std::visit([](const auto& m) { return m.parameter_count(); }, model);
  try {
    out.fit = fit(model, train, &held_out, cfg.train);
  } catch (const DivergenceError& ex) {
    r.status = "diverged";
    r.diagnostics = ex.what();
  }
  r.epochs_run = out.fit.epochs_run;
  r.grid_extensions = out.fit.grid_extensions;
  r.initial_train_loss = out.fit.initial_train_loss;
  r.final_train_loss = out.fit.final_train_loss;

  // Cost is taken from the trained model so widened grids are charged.
  const CostBreakdown cost = cost_of(model);
  r.flops = cost.total;
  r.kflops = cost.total_kflops();

  if (r.ok()) {
    if (cfg.is_classification()) {
      r.train_accuracy = class_accuracy(model, train);
      r.test_accuracy = class_accuracy(model, held_out);
      r.metric = *r.test_accuracy;
    } else {
      r.train_mse = raw_mse(model, train, data.raw_targets, train_rows, data.target_normalizer);
      r.test_mse = raw_mse(model, held_out, data.raw_targets, eval_rows, data.target_normalizer);
      r.metric = *r.test_mse;
    }
    out.model = std::move(model);
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace kanbench
