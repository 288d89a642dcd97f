#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kanbench/mlp/mlp.hpp"
#include "kanbench/train/fit.hpp"

namespace kanbench {

enum class Task { square, cube, temperature, wine };
enum class ModelKind { kan, mlp };

std::string_view to_string(Task t) noexcept;
std::string_view to_string(ModelKind m) noexcept;
Task parse_task(std::string_view s);
ModelKind parse_model_kind(std::string_view s);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One benchmark run. Parsed from a flat `key = value` file; `#` starts a
/// comment. Keys:
///   name, task, model, arch (comma list), seed, epochs, batch_size, lr,
///   lr_decay, test_fraction
///   kan only: grid, degree, grid_update (on|off)
///   mlp only: hidden_activation (relu|silu|tanh|identity)
///   square/cube only: rows
///   temperature only: window
///   temperature/wine: data (path, relative to the config file)
struct ExperimentConfig {
  std::string name;
  Task task = Task::square;
  ModelKind model = ModelKind::kan;
  std::vector<std::size_t> arch;
  int grid = 5;
  int degree = 3;
  Activation hidden_activation = Activation::relu;
  TrainConfig train;
  double test_fraction = 0.2;
  std::size_t rows = 15;
  std::size_t window = 3;
  std::string data_path;

  /// Input/output widths the task imposes on `arch`.
  std::size_t task_input_dim() const noexcept;
  std::size_t task_output_dim() const noexcept;
  bool is_classification() const noexcept { return task == Task::wine; }

  /// Canonical key/value echo, in a fixed key order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Throws ConfigError with the offending line on any unknown, duplicate,
/// malformed or task/model-incompatible key.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one `key = value` override to an already-parsed config
/// (used by `--seed` and by sweeps). Re-validates.
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

std::vector<std::size_t> parse_arch(std::string_view text);
std::string format_arch(const std::vector<std::size_t>& arch);

}  // namespace kanbench
