// kanbench: KAN vs MLP accuracy-vs-cost benchmark driver.
//
//   kanbench gen-data --task square [--rows 15] [--out square.csv]
//   kanbench train    --config configs/square_kan.cfg [--seed 7] [--out-dir runs]
//   kanbench flops    --config configs/square_kan.cfg [--format csv]
//   kanbench bench    --config configs/suite.txt [--seed 1] [--out-dir runs] [--jobs 4]
//   kanbench compare  runs/reports.json [--format md]
//   kanbench sweep    --config configs/square_mlp.cfg --lattice lattice.txt
//
// Exit status: 0 success, 1 a run diverged, 2 bad input (config, data, usage).

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "kanbench/bench/compare.hpp"
#include "kanbench/bench/report.hpp"
#include "kanbench/bench/suite.hpp"
#include "kanbench/data/datasets.hpp"
#include "kanbench/flops/flops.hpp"
#include "kanbench/model/checkpoint.hpp"
#include "kanbench/numeric/kernels.hpp"

namespace {

using namespace kanbench;

constexpr int kExitDiverged = 1;
constexpr int kExitBadInput = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string out;
  std::string format = "md";
  std::string task = "square";
  std::size_t rows = 15;
  std::string checkpoint;
  std::string lattice;
  unsigned jobs = 1;
  std::vector<std::string> inputs;
};

ExperimentConfig config_with_seed(const Options& o) {
  ExperimentConfig cfg = load_config(o.config);
  if (o.seed) apply_override(cfg, "seed", std::to_string(*o.seed));
  return cfg;
}

void print_warnings(const RunReport& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << r.name << ": " << w << "\n";
  if (!r.ok()) std::cerr << "error: " << r.name << " seed " << r.seed << " diverged: " << r.diagnostics << "\n";
}

int cmd_gen_data(const Options& o) {
  const Task task = parse_task(o.task);
  if (task != Task::square && task != Task::cube) {
    throw ConfigError("gen-data only generates the synthetic tasks (square, cube)");
  }
  const RegressionDataset ds = task == Task::square ? gen_square(o.rows) : gen_cube(o.rows);
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw ConfigError("cannot write '" + o.out + "'");
  }
  std::ostream& out = o.out.empty() ? std::cout : file;
  out << "x,y,x_norm,y_norm\n";
  char buf[128];
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", ds.raw_inputs(i, 0), ds.raw_targets(i, 0),
                  ds.inputs(i, 0), ds.targets(i, 0));
    out << buf;
  }
  return 0;
}

int cmd_train(const Options& o) {
  const ExperimentConfig cfg = config_with_seed(o);
  ExperimentOutcome outcome = run_experiment(cfg);
  print_warnings(outcome.report);
  if (!o.out_dir.empty()) {
    write_run_artifacts(outcome, o.out_dir);
    std::ofstream json(std::filesystem::path(o.out_dir) / (run_stem(outcome.report) + ".json"));
    json << to_json(outcome.report).dump(2) << "\n";
  }
  if (o.format == "csv") {
    write_reports_csv({outcome.report}, std::cout);
  } else {
    std::cout << to_json(outcome.report).dump(2) << "\n";
  }
  return outcome.report.ok() ? 0 : kExitDiverged;
}

int cmd_flops(const Options& o) {
  CostBreakdown cost;
  if (!o.checkpoint.empty()) {
    cost = cost_of(load_checkpoint_file(o.checkpoint));
  } else if (!o.config.empty()) {
    const ExperimentConfig cfg = load_config(o.config);
    cost = cfg.model == ModelKind::kan ? cost_of_kan(cfg.arch, cfg.grid, cfg.degree)
                                       : cost_of_mlp(cfg.arch, cfg.hidden_activation);
  } else {
    throw ConfigError("flops needs --config or --checkpoint");
  }
  if (o.format == "csv") {
    print_cost_csv(cost, std::cout);
  } else {
    print_cost_table(cost, std::cout);
  }
  return 0;
}

void print_comparison(const std::vector<TaskComparison>& rows, const std::string& format) {
  if (format == "csv") {
    render_csv(rows, std::cout);
  } else {
    render_markdown(rows, std::cout);
  }
}

int cmd_bench(const Options& o) {
  const Suite suite = load_suite(o.config);
  SuiteOptions opts;
  opts.seed = o.seed;
  opts.jobs = o.jobs;
  if (!o.out_dir.empty()) opts.out_dir = o.out_dir;
  const SuiteResult result = run_suite(suite, opts);
  for (const auto& r : result.reports) print_warnings(r);
  print_comparison(result.comparison, o.format);
  return result.all_ok() ? 0 : kExitDiverged;
}

int cmd_compare(const Options& o) {
  std::vector<RunReport> reports;
  for (const auto& path : o.inputs) {
    auto more = read_reports_file(path);
    reports.insert(reports.end(), more.begin(), more.end());
  }
  print_comparison(compare(reports), o.format);
  return 0;
}

int cmd_sweep(const Options& o) {
  const ExperimentConfig base = config_with_seed(o);
  std::ifstream in(o.lattice);
  if (!in) throw ConfigError("cannot open lattice '" + o.lattice + "'");
  const SweepResult result = sweep(base, parse_sweep(in), o.jobs);

  std::cout << "point,overrides,status,dev_" << (base.is_classification() ? "accuracy" : "mse") << ",kflops\n";
  char buf[64];
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& p = result.points[i];
    std::string desc;
    for (const auto& [k, v] : p.overrides) desc += (desc.empty() ? "" : " ") + k + "=" + v;
    std::snprintf(buf, sizeof buf, "%.6g,%.3f", p.dev_report.metric, p.dev_report.kflops);
    std::cout << i << ",\"" << desc << "\"," << p.dev_report.status << "," << buf << "\n";
  }
  if (!result.best) {
    std::cerr << "error: every sweep point diverged\n";
    return kExitDiverged;
  }
  std::cerr << "best: point " << *result.best << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KAN vs MLP accuracy and FLOPs benchmark"};
  app.require_subcommand(1);
  Options o;

  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"md", "csv"}));
  };

  auto* gen = app.add_subcommand("gen-data", "Write a synthetic dataset as CSV");
  gen->add_option("--task", o.task, "square or cube")->check(CLI::IsMember({"square", "cube"}));
  gen->add_option("--rows", o.rows, "Row count")->check(CLI::Range(2, 1000000));
  gen->add_option("--out", o.out, "Output file (default stdout)");

  auto* train = app.add_subcommand("train", "Run one experiment config");
  train->add_option("--config", o.config, "Experiment config")->required();
  train->add_option("--seed", o.seed, "Override the config seed");
  train->add_option("--out-dir", o.out_dir, "Write report, loss curve and checkpoint here");
  add_format(train);

  auto* flops = app.add_subcommand("flops", "Print the analytic cost of a model");
  flops->add_option("--config", o.config, "Experiment config");
  flops->add_option("--checkpoint", o.checkpoint, "Saved model (costs its actual grids)");
  add_format(flops);

  auto* bench = app.add_subcommand("bench", "Run a suite and compare KAN against MLP");
  bench->add_option("--config", o.config, "Suite file")->required();
  bench->add_option("--seed", o.seed, "Run every config with this seed only");
  bench->add_option("--out-dir", o.out_dir, "Write reports, loss curves and checkpoints here");
  bench->add_option("--jobs", o.jobs, "Concurrent runs")->check(CLI::Range(1u, 256u));
  add_format(bench);

  auto* cmp = app.add_subcommand("compare", "Build the comparison table from saved reports");
  cmp->add_option("reports", o.inputs, "reports.json files")->required();
  add_format(cmp);

  auto* sw = app.add_subcommand("sweep", "Grid-search hyperparameters on a dev split");
  sw->add_option("--config", o.config, "Base experiment config")->required();
  sw->add_option("--lattice", o.lattice, "Lattice file: one 'key = v1 | v2' per line")->required();
  sw->add_option("--seed", o.seed, "Override the config seed");
  sw->add_option("--jobs", o.jobs, "Concurrent runs")->check(CLI::Range(1u, 256u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  if (const char* forced = std::getenv("KANBENCH_SIMD"); forced && *forced) {
    std::cerr << "kernels: " << kernels::isa_name(kernels::active().isa) << "\n";
  }

  try {
    if (*gen) return cmd_gen_data(o);
    if (*train) return cmd_train(o);
    if (*flops) return cmd_flops(o);
    if (*bench) return cmd_bench(o);
    if (*cmp) return cmd_compare(o);
    if (*sw) return cmd_sweep(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
