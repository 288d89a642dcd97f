#include "kanbench/data/datasets.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace kanbench {
namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE && std::isfinite(out);
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

[[noreturn]] void bad_line(const std::string& path, std::size_t line_no, const std::string& what) {
  throw DataError(path + ":" + std::to_string(line_no) + ": " + what);
}

RegressionDataset power_dataset(std::string name, std::size_t n, int power) {
  if (n < 2) throw std::invalid_argument(name + ": need at least 2 rows");
  RegressionDataset d;
  d.name = std::move(name);
  d.raw_inputs = Matrix(n, 1);
  d.raw_targets = Matrix(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i + 1);
    d.raw_inputs(i, 0) = x;
    d.raw_targets(i, 0) = std::pow(x, power);
  }
  d.input_normalizer = Normalizer::min_max(d.raw_inputs);
  d.target_normalizer = Normalizer::min_max(d.raw_targets);
  d.inputs = d.input_normalizer.normalize(d.raw_inputs);
  d.targets = d.target_normalizer.normalize(d.raw_targets);
  return d;
}

}  // namespace

Normalizer::Normalizer(std::vector<double> scale, std::vector<double> shift)
    : scale_(std::move(scale)), shift_(std::move(shift)) {
  if (scale_.size() != shift_.size()) throw std::invalid_argument("Normalizer: size mismatch");
  for (double s : scale_) {
    if (!(s != 0.0) || !std::isfinite(s)) throw std::invalid_argument("Normalizer: scale must be finite and nonzero");
  }
}

Normalizer Normalizer::min_max(const Matrix& raw) {
  std::vector<double> scale(raw.cols(), 1.0);
  std::vector<double> shift(raw.cols(), 0.0);
  for (std::size_t c = 0; c < raw.cols(); ++c) {
    double lo = raw(0, c);
    double hi = raw(0, c);
    for (std::size_t r = 1; r < raw.rows(); ++r) {
      lo = std::min(lo, raw(r, c));
      hi = std::max(hi, raw(r, c));
    }
    if (hi > lo) {
      scale[c] = 2.0 / (hi - lo);
      shift[c] = -1.0 - lo * scale[c];
    } else {
      shift[c] = -lo;
    }
  }
  return Normalizer(std::move(scale), std::move(shift));
}

Normalizer Normalizer::min_max_shared(std::span<const double> values, std::size_t columns) {
  if (values.empty()) throw std::invalid_argument("Normalizer::min_max_shared: no values");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  Matrix two(2, 1);
  two(0, 0) = *lo_it;
  two(1, 0) = *hi_it;
  const Normalizer base = min_max(two);
  return Normalizer(std::vector<double>(columns, base.scale()[0]),
                    std::vector<double>(columns, base.shift()[0]));
}

Normalizer Normalizer::standardize_bounded(const Matrix& raw) {
  const double n = static_cast<double>(raw.rows());
  std::vector<double> scale(raw.cols(), 1.0);
  std::vector<double> shift(raw.cols(), 0.0);
  for (std::size_t c = 0; c < raw.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < raw.rows(); ++r) mean += raw(r, c);
    mean /= n;
    double var = 0.0;
    double max_dev = 0.0;
    for (std::size_t r = 0; r < raw.rows(); ++r) {
      const double d = raw(r, c) - mean;
      var += d * d;
      max_dev = std::max(max_dev, std::abs(d));
    }
    const double sd = std::sqrt(var / n);
    if (sd > 0.0) {
      // z = (x - mean) / sd, then z / max|z| == (x - mean) / max|x - mean|
      scale[c] = 1.0 / max_dev;
      shift[c] = -mean * scale[c];
    } else {
      shift[c] = -mean;
    }
  }
  return Normalizer(std::move(scale), std::move(shift));
}

Matrix Normalizer::normalize(const Matrix& raw) const {
  if (raw.cols() != columns()) throw std::invalid_argument("Normalizer: column count mismatch");
  Matrix out(raw.rows(), raw.cols());
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    for (std::size_t c = 0; c < raw.cols(); ++c) out(r, c) = normalize(c, raw(r, c));
  }
  return out;
}

Matrix Normalizer::denormalize(const Matrix& normalized) const {
  if (normalized.cols() != columns()) throw std::invalid_argument("Normalizer: column count mismatch");
  Matrix out(normalized.rows(), normalized.cols());
  for (std::size_t r = 0; r < normalized.rows(); ++r) {
    for (std::size_t c = 0; c < normalized.cols(); ++c) out(r, c) = denormalize(c, normalized(r, c));
  }
  return out;
}

RegressionDataset gen_square(std::size_t n) { return power_dataset("square", n, 2); }
RegressionDataset gen_cube(std::size_t n) { return power_dataset("cube", n, 3); }

WindowedSeries sliding_window(std::span<const double> series, std::size_t window) {
  if (window == 0) throw std::invalid_argument("sliding_window: window must be >= 1");
  if (series.size() <= window) {
    throw std::invalid_argument("sliding_window: series length must exceed the window");
  }
  const std::size_t n = series.size() - window;
  WindowedSeries out{Matrix(n, window), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < window; ++j) out.inputs(i, j) = series[i + j];
    out.targets[i] = series[i + window];
  }
  return out;
}

std::vector<double> read_temperature_series(const std::string& path) {
  std::ifstream in = open(path);
  std::string line;
  std::size_t line_no = 0;
  std::size_t temp_col = 1;
  bool header_seen = false;
  std::vector<double> series;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (!header_seen) {
      header_seen = true;
      const auto it = std::find_if(fields.begin(), fields.end(), [](const std::string& f) {
        std::string lower;
        for (char ch : f) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        return lower == "temp" || lower == "temperature";
      });
      if (fields.size() < 2 || it == fields.end()) bad_line(path, line_no, "expected header with Date,Temp columns");
      temp_col = static_cast<std::size_t>(it - fields.begin());
      continue;
    }
    if (fields.size() <= temp_col) bad_line(path, line_no, "missing temperature column");
    if (fields[0].empty()) bad_line(path, line_no, "missing date");
    double v;
    if (!parse_real(fields[temp_col], v)) {
      bad_line(path, line_no, "temperature '" + fields[temp_col] + "' is not a number");
    }
    series.push_back(v);
  }
  if (!header_seen) throw DataError(path + ": empty file");
  return series;
}

RegressionDataset temperatures_from_series(std::span<const double> series, std::size_t window) {
  const WindowedSeries w = sliding_window(series, window);
  RegressionDataset d;
  d.name = "temperature";
  d.raw_inputs = w.inputs;
  d.raw_targets = Matrix(w.targets.size(), 1, w.targets);
  d.input_normalizer = Normalizer::min_max_shared(series, window);
  d.target_normalizer = Normalizer::min_max_shared(series, 1);
  d.inputs = d.input_normalizer.normalize(d.raw_inputs);
  d.targets = d.target_normalizer.normalize(d.raw_targets);
  if (series.size() != kTemperatureRows) {
    d.warnings.push_back("expected " + std::to_string(kTemperatureRows) + " temperature rows, found " +
                         std::to_string(series.size()));
  }
  return d;
}

RegressionDataset load_temperatures(const std::string& path, std::size_t window) {
  const auto series = read_temperature_series(path);
  return temperatures_from_series(series, window);
}

ClassificationDataset load_wine(const std::string& path) {
  std::ifstream in = open(path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> features;
  std::vector<std::size_t> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != kWineFeatures + 1) {
      bad_line(path, line_no, "expected " + std::to_string(kWineFeatures + 1) + " columns, found " +
                                   std::to_string(fields.size()));
    }
    double label;
    if (!parse_real(fields[0], label) || label != std::floor(label) || label < 1 ||
        label > static_cast<double>(kWineClasses)) {
      bad_line(path, line_no, "class label '" + fields[0] + "' not in {1,2,3}");
    }
    labels.push_back(static_cast<std::size_t>(label) - 1);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      double v;
      if (!parse_real(fields[j], v)) bad_line(path, line_no, "feature '" + fields[j] + "' is not a number");
      features.push_back(v);
    }
  }
  if (labels.empty()) throw DataError(path + ": no rows");

  ClassificationDataset d;
  d.name = "wine";
  d.num_classes = kWineClasses;
  d.raw_inputs = Matrix(labels.size(), kWineFeatures, std::move(features));
  d.input_normalizer = Normalizer::standardize_bounded(d.raw_inputs);
  d.inputs = d.input_normalizer.normalize(d.raw_inputs);
  d.labels = std::move(labels);
  d.onehot = Matrix(d.labels.size(), kWineClasses);
  for (std::size_t i = 0; i < d.labels.size(); ++i) d.onehot(i, d.labels[i]) = 1.0;
  return d;
}

SplitIndices split(std::size_t n, double test_fraction, Rng& rng, SplitMode mode,
                   std::span<const std::size_t> labels) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("split: test fraction must be in (0, 1)");
  }
  SplitIndices out;
  const auto take = [&](std::size_t count) {
    return static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(count)));
  };

  if (mode == SplitMode::chronological) {
    const std::size_t n_test = take(n);
    if (n_test == 0 || n_test >= n) throw std::invalid_argument("split: one side would be empty");
    for (std::size_t i = 0; i < n; ++i) (i < n - n_test ? out.train : out.test).push_back(i);
    return out;
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  if (mode == SplitMode::stratified) {
    if (labels.size() != n) throw std::invalid_argument("split: stratified split needs one label per row");
    for (std::size_t i = 0; i < n; ++i) groups[labels[i]].push_back(i);
  } else {
    auto& all = groups[0];
    all.resize(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
  }
  for (auto& [label, idx] : groups) {
    rng.shuffle(std::span<std::size_t>(idx));
    const std::size_t n_test = take(idx.size());
    out.test.insert(out.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train.insert(out.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  }
  if (out.test.empty() || out.train.empty()) throw std::invalid_argument("split: one side would be empty");
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

Matrix select_rows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= m.rows()) throw std::out_of_range("select_rows: row index out of range");
    const auto src = m.row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace kanbench
