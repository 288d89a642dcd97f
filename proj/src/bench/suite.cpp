#include "kanbench/bench/suite.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include "kanbench/bench/report.hpp"
#include "kanbench/model/checkpoint.hpp"

namespace kanbench {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

// Runs work(i) for i in [0, count) on up to `jobs` threads.
template <typename Work>
void parallel_for(std::size_t count, unsigned jobs, Work work) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(jobs, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          work(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

Suite parse_suite(std::istream& in, const std::filesystem::path& base_dir) {
  Suite suite;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("suite line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key == "seeds") {
      suite.seeds.clear();
      for (const auto& s : split_on(value, ',')) {
        std::uint64_t v;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
          throw ConfigError("suite line " + std::to_string(line_no) + ": bad seed '" + s + "'");
        }
        suite.seeds.push_back(v);
      }
    } else if (key == "run") {
      std::filesystem::path p(value);
      if (p.is_relative()) p = base_dir / p;
      suite.runs.push_back(load_config(p));
    } else {
      throw ConfigError("suite line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (suite.runs.empty()) throw ConfigError("suite lists no runs");
  return suite;
}

Suite load_suite(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open suite '" + path.string() + "'");
  return parse_suite(in, path.parent_path());
}

bool SuiteResult::all_ok() const noexcept {
  for (const auto& r : reports) {
    if (!r.ok()) return false;
  }
  return true;
}

std::string run_stem(const RunReport& r) { return r.name + "_seed" + std::to_string(r.seed); }

void write_run_artifacts(const ExperimentOutcome& outcome, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string stem = run_stem(outcome.report);
  {
    std::ofstream csv(dir / (stem + "_loss.csv"));
    write_loss_csv(outcome.fit, csv);
  }
  if (outcome.model) save_checkpoint_file(*outcome.model, (dir / (stem + ".ckpt")).string());
}

SuiteResult run_suite(const Suite& suite, const SuiteOptions& options) {
  std::vector<std::uint64_t> seeds = suite.seeds;
  if (options.seed) seeds = {*options.seed};
  if (seeds.empty()) seeds = {0};

  std::vector<ExperimentConfig> work;
  for (const auto& cfg : suite.runs) {
    for (auto seed : seeds) {
      ExperimentConfig c = cfg;
      c.train.seed = seed;
      work.push_back(std::move(c));
    }
  }

  SuiteResult result;
  result.reports.resize(work.size());
  parallel_for(work.size(), options.jobs, [&](std::size_t i) {
    ExperimentOutcome outcome = run_experiment(work[i]);
    if (options.out_dir) write_run_artifacts(outcome, *options.out_dir);
    result.reports[i] = std::move(outcome.report);
  });

  result.comparison = compare(result.reports);
  if (options.out_dir) {
    const auto& dir = *options.out_dir;
    std::filesystem::create_directories(dir);
    std::ofstream json(dir / "reports.json");
    write_reports(result.reports, json);
    std::ofstream csv(dir / "reports.csv");
    write_reports_csv(result.reports, csv);
    std::ofstream md(dir / "comparison.md");
    render_markdown(result.comparison, md);
    std::ofstream ccsv(dir / "comparison.csv");
    render_csv(result.comparison, ccsv);
  }
  return result;
}

std::vector<SweepAxis> parse_sweep(std::istream& in) {
  std::vector<SweepAxis> axes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("sweep line " + std::to_string(line_no) + ": expected 'key = v1 | v2'");
    SweepAxis axis{trim(std::string_view(body).substr(0, eq)),
                   split_on(trim(std::string_view(body).substr(eq + 1)), '|')};
    if (axis.values.empty()) throw ConfigError("sweep line " + std::to_string(line_no) + ": no values");
    axes.push_back(std::move(axis));
  }
  return axes;
}

SweepResult sweep(const ExperimentConfig& base, const std::vector<SweepAxis>& axes, unsigned jobs) {
  // Cartesian product, last axis varying fastest.
  std::vector<std::vector<std::pair<std::string, std::string>>> lattice{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& point : lattice) {
      for (const auto& v : axis.values) {
        auto p = point;
        p.emplace_back(axis.key, v);
        next.push_back(std::move(p));
      }
    }
    lattice = std::move(next);
  }

  SweepResult result;
  result.points.resize(lattice.size());
  std::vector<ExperimentConfig> configs;
  for (const auto& point : lattice) {
    ExperimentConfig cfg = base;
    for (const auto& [k, v] : point) apply_override(cfg, k, v);
    configs.push_back(std::move(cfg));
  }
  parallel_for(lattice.size(), jobs, [&](std::size_t i) {
    result.points[i] = SweepPoint{lattice[i], run_experiment(configs[i], EvalSplit::dev).report};
  });

  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const RunReport& r = result.points[i].dev_report;
    if (!r.ok()) continue;
    if (!result.best) {
      result.best = i;
      continue;
    }
    const RunReport& b = result.points[*result.best].dev_report;
    const bool better = r.metric_name == "accuracy" ? r.metric > b.metric : r.metric < b.metric;
    if (better) result.best = i;
  }
  return result;
}

}  // namespace kanbench
