#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <set>

#include "kanbench/data/datasets.hpp"

using namespace kanbench;

namespace {

const std::string kData = std::string(KANBENCH_SOURCE_DIR) + "/data/";

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("kanbench_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

bool has_pair(const RegressionDataset& d, double x, double y) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.raw_inputs(i, 0) == x && d.raw_targets(i, 0) == y) return true;
  }
  return false;
}

void check_unit_range(const Matrix& m) {
  for (double v : m.data()) {
    CHECK(v >= -1.0 - 1e-12);
    CHECK(v <= 1.0 + 1e-12);
  }
}

}  // namespace

TEST_CASE("square and cube generators") {
  const RegressionDataset sq = gen_square();
  const RegressionDataset cu = gen_cube();
  CHECK(sq.size() == 15);
  CHECK(cu.size() == 15);
  CHECK(has_pair(sq, 4, 16));
  CHECK(has_pair(cu, 3, 27));
  CHECK(has_pair(cu, 15, 3375));
  check_unit_range(sq.inputs);
  check_unit_range(sq.targets);
  CHECK(sq.inputs(0, 0) == doctest::Approx(-1.0));
  CHECK(sq.targets(14, 0) == doctest::Approx(1.0));
  CHECK(gen_square(2).size() == 2);
  CHECK_THROWS_AS(gen_square(1), std::invalid_argument);
}

TEST_CASE("normalizer round trip is exact to 1e-12") {
  const RegressionDataset cu = gen_cube(15);
  const Matrix back = cu.target_normalizer.denormalize(cu.targets);
  for (std::size_t i = 0; i < back.rows(); ++i) {
    CHECK(std::fabs(back(i, 0) - cu.raw_targets(i, 0)) <= 1e-12 * std::max(1.0, cu.raw_targets(i, 0)));
  }
  const Normalizer n({2.0, 0.5}, {1.0, -3.0});
  CHECK(n.normalize(0, 3.0) == 7.0);
  CHECK(n.denormalize(1, n.normalize(1, 0.123)) == doctest::Approx(0.123).epsilon(1e-15));
  CHECK_THROWS_AS(Normalizer({0.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Normalizer({1.0}, {}), std::invalid_argument);
}

TEST_CASE("min-max maps constant columns to zero") {
  const Matrix raw(3, 2, {1, 5, 2, 5, 3, 5});
  const Normalizer n = Normalizer::min_max(raw);
  const Matrix z = n.normalize(raw);
  CHECK(z(0, 0) == doctest::Approx(-1));
  CHECK(z(2, 0) == doctest::Approx(1));
  for (std::size_t i = 0; i < 3; ++i) CHECK(z(i, 1) == 0.0);
}

TEST_CASE("sliding window") {
  const std::vector<double> s{1, 2, 3, 4, 5};
  const WindowedSeries w = sliding_window(s, 3);
  CHECK(w.inputs == Matrix(2, 3, {1, 2, 3, 2, 3, 4}));
  CHECK(w.targets == std::vector<double>{4, 5});
  CHECK(sliding_window(std::vector<double>{1, 2, 3, 4}, 3).targets.size() == 1);
  const WindowedSeries c = sliding_window(std::vector<double>(10, 2.5), 3);
  for (double t : c.targets) CHECK(t == 2.5);
  for (std::size_t n = 2; n < 40; ++n) {
    std::vector<double> series(n);
    std::iota(series.begin(), series.end(), 0.0);
    for (std::size_t win = 1; win < n; ++win) CHECK(sliding_window(series, win).targets.size() == n - win);
  }
  CHECK_THROWS_AS(sliding_window(std::vector<double>{1, 2, 3}, 3), std::invalid_argument);
  CHECK_THROWS_AS(sliding_window(std::vector<double>{1, 2, 3}, 0), std::invalid_argument);
}

TEST_CASE("temperature series of the canonical length gives 3648 samples") {
  std::vector<double> series(kTemperatureRows);
  for (std::size_t i = 0; i < series.size(); ++i) series[i] = 11 + 6 * std::sin(i * 2 * std::numbers::pi / 365.25);
  const RegressionDataset d = temperatures_from_series(series, 3);
  CHECK(d.size() == 3648);
  CHECK(d.warnings.empty());
  check_unit_range(d.inputs);
  check_unit_range(d.targets);
  // Inputs and target share one map, so a lagged input equals an earlier target.
  CHECK(d.inputs(1, 2) == d.targets(0, 0));
  const Matrix back = d.target_normalizer.denormalize(d.targets);
  for (std::size_t i = 0; i < back.rows(); ++i) CHECK(std::fabs(back(i, 0) - d.raw_targets(i, 0)) <= 1e-12);
}

TEST_CASE("shipped temperature file") {
  const auto series = read_temperature_series(kData + "daily-min-temperatures.csv");
  // The shipped copy has one row fewer than the documented 3651.
  CHECK(series.size() == 3650);
  CHECK(series.front() == 20.7);
  const RegressionDataset d = load_temperatures(kData + "daily-min-temperatures.csv");
  CHECK(d.size() == series.size() - 3);
  REQUIRE(d.warnings.size() == 1);
  CHECK(d.warnings[0].find("3651") != std::string::npos);
}

TEST_CASE("temperature parsing errors name the line") {
  CHECK_THROWS_AS(read_temperature_series(write_temp("t0.csv", "")), DataError);
  CHECK_THROWS_AS(read_temperature_series(write_temp("t1.csv", "a,b\n1,2\n")), DataError);
  CHECK_THROWS_AS(read_temperature_series("/nonexistent/t.csv"), DataError);
  try {
    read_temperature_series(write_temp("t2.csv", "Date,Temp\n1981-01-01,20.7\n1981-01-02,warm\n"));
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  CHECK_THROWS_AS(read_temperature_series(write_temp("t3.csv", "Date,Temp\n1981-01-01\n")), DataError);
  const auto ok = read_temperature_series(write_temp("t4.csv", "Date,Temp\r\n1981-01-01,1.5\r\n\r\n1981-01-02,-0.5\r\n"));
  CHECK(ok == std::vector<double>{1.5, -0.5});
}

TEST_CASE("shipped wine file") {
  const ClassificationDataset d = load_wine(kData + "wine.data");
  CHECK(d.size() == 178);
  CHECK(d.inputs.cols() == 13);
  CHECK(d.num_classes == 3);
  std::array<int, 3> counts{};
  for (auto l : d.labels) ++counts[l];
  CHECK(counts == std::array<int, 3>{59, 71, 48});
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(d.onehot(i, c) == (c == d.labels[i] ? 1.0 : 0.0));
  }
  check_unit_range(d.inputs);
  for (std::size_t j = 0; j < 13; ++j) {
    double mean = 0, absmax = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      mean += d.inputs(i, j);
      absmax = std::max(absmax, std::fabs(d.inputs(i, j)));
    }
    CHECK(std::fabs(mean / d.size()) <= 1e-9);
    CHECK(absmax == doctest::Approx(1.0));
  }
}

TEST_CASE("wine parsing: class 3 is one-hot (0,0,1) and bad rows are rejected") {
  const std::string row = ",1,2,3,4,5,6,7,8,9,10,11,12,13\n";
  const ClassificationDataset d = load_wine(write_temp("w0.data", "3" + row + "1" + row.substr(0, row.size() - 2) + "9\n"));
  CHECK(d.labels == std::vector<std::size_t>{2, 0});
  CHECK(d.onehot(0, 2) == 1.0);
  CHECK(d.onehot(0, 0) == 0.0);
  CHECK_THROWS_AS(load_wine(write_temp("w1.data", "4" + row)), DataError);
  CHECK_THROWS_AS(load_wine(write_temp("w2.data", "1.5" + row)), DataError);
  CHECK_THROWS_AS(load_wine(write_temp("w3.data", "1,2,3\n")), DataError);
  CHECK_THROWS_AS(load_wine(write_temp("w4.data", "")), DataError);
  CHECK_THROWS_AS(load_wine(write_temp("w5.data", "1,x,2,3,4,5,6,7,8,9,10,11,12,13\n")), DataError);
}

TEST_CASE("random split is disjoint, exhaustive and reproducible") {
  Rng a(1), b(1), c(2);
  const SplitIndices s1 = split(15, 0.2, a, SplitMode::random);
  const SplitIndices s2 = split(15, 0.2, b, SplitMode::random);
  const SplitIndices s3 = split(15, 0.2, c, SplitMode::random);
  CHECK(s1.train == s2.train);
  CHECK(s1.test == s2.test);
  CHECK(s1.test != s3.test);
  CHECK(s1.test.size() == 3);
  std::set<std::size_t> all(s1.train.begin(), s1.train.end());
  all.insert(s1.test.begin(), s1.test.end());
  CHECK(all.size() == 15);
  CHECK(*all.rbegin() == 14);
  CHECK(std::is_sorted(s1.train.begin(), s1.train.end()));
  CHECK(std::is_sorted(s1.test.begin(), s1.test.end()));
}

TEST_CASE("stratified wine split is 142/36 and keeps class proportions") {
  const ClassificationDataset d = load_wine(kData + "wine.data");
  Rng rng(3);
  const SplitIndices s = split(d.size(), 0.2, rng, SplitMode::stratified, d.labels);
  CHECK(s.train.size() == 142);
  CHECK(s.test.size() == 36);
  std::array<double, 3> total{}, test{};
  for (auto l : d.labels) ++total[l];
  for (auto i : s.test) ++test[d.labels[i]];
  for (int c = 0; c < 3; ++c) CHECK(std::fabs(test[c] - 0.2 * total[c]) <= 1.0);
}

TEST_CASE("chronological split holds out the tail") {
  Rng rng(4);
  const SplitIndices s = split(10, 0.3, rng, SplitMode::chronological);
  CHECK(s.train == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  CHECK(s.test == std::vector<std::size_t>{7, 8, 9});
}

TEST_CASE("split rejects degenerate fractions") {
  Rng rng(5);
  CHECK_THROWS_AS(split(10, 0.0, rng, SplitMode::random), std::invalid_argument);
  CHECK_THROWS_AS(split(10, 1.0, rng, SplitMode::random), std::invalid_argument);
  CHECK_THROWS_AS(split(10, 0.01, rng, SplitMode::random), std::invalid_argument);
  CHECK_THROWS_AS(split(3, 0.2, rng, SplitMode::stratified, std::vector<std::size_t>{0, 1}),
                  std::invalid_argument);
}

TEST_CASE("select rows") {
  const Matrix m(3, 2, {1, 2, 3, 4, 5, 6});
  CHECK(select_rows(m, std::vector<std::size_t>{2, 0}) == Matrix(2, 2, {5, 6, 1, 2}));
  CHECK_THROWS_AS(select_rows(m, std::vector<std::size_t>{3}), std::out_of_range);
}
