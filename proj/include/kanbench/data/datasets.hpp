#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kanbench/numeric/matrix.hpp"
#include "kanbench/numeric/rng.hpp"

namespace kanbench {

/// Per-column affine map: normalized = raw * scale + shift.
class Normalizer {
 public:
  Normalizer() = default;
  Normalizer(std::vector<double> scale, std::vector<double> shift);

  /// Min-max onto [-1, 1] per column. Constant columns map to 0.
  static Normalizer min_max(const Matrix& raw);
  /// Single map shared by every column, fitted on the pooled values.
  static Normalizer min_max_shared(std::span<const double> values, std::size_t columns);
  /// Zero mean, unit (population) variance, then divided by the largest
  /// |standardized value| so every column lands in [-1, 1].
  static Normalizer standardize_bounded(const Matrix& raw);

  std::size_t columns() const noexcept { return scale_.size(); }
  std::span<const double> scale() const noexcept { return scale_; }
  std::span<const double> shift() const noexcept { return shift_; }

  double normalize(std::size_t col, double v) const { return v * scale_[col] + shift_[col]; }
  double denormalize(std::size_t col, double v) const { return (v - shift_[col]) / scale_[col]; }

  Matrix normalize(const Matrix& raw) const;
  Matrix denormalize(const Matrix& normalized) const;

 private:
  std::vector<double> scale_;
  std::vector<double> shift_;
};

struct RegressionDataset {
  std::string name;
  Matrix raw_inputs;
  Matrix raw_targets;
  Matrix inputs;   // normalized
  Matrix targets;  // normalized
  Normalizer input_normalizer;
  Normalizer target_normalizer;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return inputs.rows(); }
};

struct ClassificationDataset {
  std::string name;
  Matrix raw_inputs;
  Matrix inputs;  // normalized
  std::vector<std::size_t> labels;  // 0-based
  Matrix onehot;
  std::size_t num_classes = 0;
  Normalizer input_normalizer;

  std::size_t size() const noexcept { return inputs.rows(); }
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// x = 1..n paired with x^2 (square) or x^3 (cube).
RegressionDataset gen_square(std::size_t n = 15);
RegressionDataset gen_cube(std::size_t n = 15);

struct WindowedSeries {
  Matrix inputs;                // (N - w) x w
  std::vector<double> targets;  // N - w
};

/// Sample i has inputs series[i .. i+w-1] and target series[i+w].
WindowedSeries sliding_window(std::span<const double> series, std::size_t window = 3);

inline constexpr std::size_t kTemperatureRows = 3651;

/// Parses a Date,Temp CSV (header required) into its temperature column.
/// Throws DataError naming the line on malformed input.
std::vector<double> read_temperature_series(const std::string& path);

/// Windowed next-day temperature regression. Inputs and target share one
/// min-max map fitted on the whole series. A row count other than
/// kTemperatureRows is recorded in `warnings`.
RegressionDataset load_temperatures(const std::string& path, std::size_t window = 3);
RegressionDataset temperatures_from_series(std::span<const double> series, std::size_t window = 3);

inline constexpr std::size_t kWineRows = 178;
inline constexpr std::size_t kWineFeatures = 13;
inline constexpr std::size_t kWineClasses = 3;

/// UCI layout: class label in {1,2,3}, then 13 real features.
ClassificationDataset load_wine(const std::string& path);

enum class SplitMode {
  random,
  /// Per-class random split; each class contributes round(fraction * count).
  stratified,
  /// The last round(fraction * N) rows become the test set.
  chronological,
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Disjoint, exhaustive index split. Throws std::invalid_argument when either
/// side would be empty. Both sides are returned in ascending order.
SplitIndices split(std::size_t n, double test_fraction, Rng& rng, SplitMode mode,
                   std::span<const std::size_t> labels = {});

Matrix select_rows(const Matrix& m, std::span<const std::size_t> rows);

}  // namespace kanbench
