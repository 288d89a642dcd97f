#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kanbench/bench/compare.hpp"
#include "kanbench/bench/experiment.hpp"

namespace kanbench {

/// A suite file lists experiment configs and the seeds to run each with:
///   seeds = 1, 2, 3
///   run = square_kan.cfg
///   run = square_mlp.cfg
/// Paths are relative to the suite file.
struct Suite {
  std::vector<std::uint64_t> seeds;
  std::vector<ExperimentConfig> runs;
};

Suite parse_suite(std::istream& in, const std::filesystem::path& base_dir);
Suite load_suite(const std::filesystem::path& path);

struct SuiteOptions {
  /// Replaces the suite's seed list with this single seed.
  std::optional<std::uint64_t> seed;
  /// When set, per-run loss CSVs, checkpoints, reports.json/csv and the
  /// comparison tables are written here.
  std::optional<std::filesystem::path> out_dir;
  /// Independent runs executed concurrently.
  unsigned jobs = 1;
};

struct SuiteResult {
  std::vector<RunReport> reports;  // runs x seeds, in suite order
  std::vector<TaskComparison> comparison;
  bool all_ok() const noexcept;
};

SuiteResult run_suite(const Suite& suite, const SuiteOptions& options);

/// File stem used for a run's artifacts: <name>_seed<seed>.
std::string run_stem(const RunReport& r);

/// Writes <stem>_loss.csv and <stem>.ckpt (when a model is present).
void write_run_artifacts(const ExperimentOutcome& outcome, const std::filesystem::path& dir);

/// Hyperparameter lattice, one axis per line: `key = v1 | v2 | ...`.
struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

std::vector<SweepAxis> parse_sweep(std::istream& in);

struct SweepPoint {
  std::vector<std::pair<std::string, std::string>> overrides;
  RunReport dev_report;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  /// Index into points of the best dev result; nullopt if every point diverged.
  std::optional<std::size_t> best;
};

/// Runs every lattice point on the dev split and picks the lowest dev MSE
/// (or highest dev accuracy).
SweepResult sweep(const ExperimentConfig& base, const std::vector<SweepAxis>& axes, unsigned jobs = 1);

}  // namespace kanbench
