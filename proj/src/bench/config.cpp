#include "kanbench/bench/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace kanbench {
namespace {

struct Entry {
  std::string value;
  std::size_t line;
};
using Entries = std::map<std::string, Entry>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt_real(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

[[noreturn]] void fail(const std::string& key, const Entry* e, const std::string& what) {
  std::string where = e != nullptr && e->line > 0 ? "line " + std::to_string(e->line) + ": " : "";
  throw ConfigError(where + "'" + key + "': " + what);
}

double to_real(const std::string& key, const Entry& e) {
  double v;
  const char* end = e.value.data() + e.value.size();
  const auto r = std::from_chars(e.value.data(), end, v);
  if (r.ec != std::errc{} || r.ptr != end) fail(key, &e, "expected a real number, got '" + e.value + "'");
  return v;
}

std::uint64_t to_count(const std::string& key, const Entry& e) {
  std::uint64_t v;
  const char* end = e.value.data() + e.value.size();
  const auto r = std::from_chars(e.value.data(), end, v);
  if (r.ec != std::errc{} || r.ptr != end) fail(key, &e, "expected a non-negative integer, got '" + e.value + "'");
  return v;
}

bool to_switch(const std::string& key, const Entry& e) {
  if (e.value == "on" || e.value == "true" || e.value == "1") return true;
  if (e.value == "off" || e.value == "false" || e.value == "0") return false;
  fail(key, &e, "expected on|off, got '" + e.value + "'");
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "name",   "task",       "model",    "arch",          "seed",   "epochs",
      "batch_size", "lr",     "lr_decay", "test_fraction", "grid",   "degree",
      "grid_update", "hidden_activation", "rows", "window", "data"};
  return keys;
}

ExperimentConfig build(const Entries& entries, const std::filesystem::path& base_dir) {
  const auto get = [&](const std::string& key) -> const Entry* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  const auto require = [&](const std::string& key) -> const Entry& {
    const Entry* e = get(key);
    if (e == nullptr) throw ConfigError("missing required key '" + key + "'");
    return *e;
  };

  ExperimentConfig cfg;
  try {
    cfg.task = parse_task(require("task").value);
  } catch (const std::invalid_argument& ex) {
    fail("task", get("task"), ex.what());
  }
  try {
    cfg.model = parse_model_kind(require("model").value);
  } catch (const std::invalid_argument& ex) {
    fail("model", get("model"), ex.what());
  }
  try {
    cfg.arch = parse_arch(require("arch").value);
  } catch (const std::invalid_argument& ex) {
    fail("arch", get("arch"), ex.what());
  }

  const bool kan = cfg.model == ModelKind::kan;
  const bool synthetic = cfg.task == Task::square || cfg.task == Task::cube;
  const auto forbid = [&](const std::string& key, bool allowed, const char* why) {
    if (!allowed && get(key) != nullptr) fail(key, get(key), why);
  };
  forbid("grid", kan, "only valid for model = kan");
  forbid("degree", kan, "only valid for model = kan");
  forbid("grid_update", kan, "only valid for model = kan");
  forbid("hidden_activation", !kan, "only valid for model = mlp");
  forbid("rows", synthetic, "only valid for task = square|cube");
  forbid("window", cfg.task == Task::temperature, "only valid for task = temperature");
  forbid("data", !synthetic, "synthetic tasks are generated, not loaded");

  cfg.name = get("name") ? get("name")->value
                         : std::string(to_string(cfg.task)) + "_" + std::string(to_string(cfg.model));
  if (const Entry* e = get("grid")) cfg.grid = static_cast<int>(to_count("grid", *e));
  if (const Entry* e = get("degree")) cfg.degree = static_cast<int>(to_count("degree", *e));
  if (const Entry* e = get("grid_update")) cfg.train.grid_update = to_switch("grid_update", *e);
  if (const Entry* e = get("hidden_activation")) {
    try {
      cfg.hidden_activation = parse_activation(e->value);
    } catch (const std::invalid_argument& ex) {
      fail("hidden_activation", e, ex.what());
    }
  }
  if (const Entry* e = get("rows")) cfg.rows = to_count("rows", *e);
  if (const Entry* e = get("window")) cfg.window = to_count("window", *e);
  if (const Entry* e = get("data")) {
    std::filesystem::path p(e->value);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    cfg.data_path = p.lexically_normal().string();
  }
  if (!synthetic && cfg.data_path.empty()) throw ConfigError("missing required key 'data'");

  cfg.train.loss = cfg.is_classification() ? LossKind::cross_entropy : LossKind::mse;
  cfg.train.batch_size = synthetic ? 0 : 32;
  if (const Entry* e = get("epochs")) cfg.train.epochs = to_count("epochs", *e);
  if (const Entry* e = get("batch_size")) cfg.train.batch_size = to_count("batch_size", *e);
  if (const Entry* e = get("lr")) cfg.train.lr = to_real("lr", *e);
  if (const Entry* e = get("lr_decay")) cfg.train.lr_decay = to_real("lr_decay", *e);
  if (const Entry* e = get("seed")) cfg.train.seed = to_count("seed", *e);
  if (const Entry* e = get("test_fraction")) cfg.test_fraction = to_real("test_fraction", *e);

  try {
    cfg.train.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
    fail("test_fraction", get("test_fraction"), "must be in (0, 1)");
  }
  if (kan && (cfg.grid < 1 || cfg.degree < 1 || cfg.degree > kMaxSplineDegree)) {
    throw ConfigError("kan needs grid >= 1 and degree in [1, " + std::to_string(kMaxSplineDegree) + "]");
  }
  if (synthetic && cfg.rows < 2) fail("rows", get("rows"), "must be >= 2");
  if (cfg.task == Task::temperature && cfg.window < 1) fail("window", get("window"), "must be >= 1");
  if (cfg.arch.size() < 2) fail("arch", get("arch"), "needs at least input and output widths");
  if (cfg.arch.front() != cfg.task_input_dim() || cfg.arch.back() != cfg.task_output_dim()) {
    fail("arch", get("arch"),
         "task " + std::string(to_string(cfg.task)) + " needs input width " +
             std::to_string(cfg.task_input_dim()) + " and output width " +
             std::to_string(cfg.task_output_dim()));
  }
  return cfg;
}

Entries entries_from_echo(const ExperimentConfig& cfg) {
  Entries out;
  for (auto& [k, v] : cfg.echo()) out[k] = Entry{v, 0};
  return out;
}

}  // namespace

std::string_view to_string(Task t) noexcept {
  switch (t) {
    case Task::square: return "square";
    case Task::cube: return "cube";
    case Task::temperature: return "temperature";
    case Task::wine: return "wine";
  }
  return "square";
}

std::string_view to_string(ModelKind m) noexcept { return m == ModelKind::kan ? "kan" : "mlp"; }

Task parse_task(std::string_view s) {
  if (s == "square") return Task::square;
  if (s == "cube") return Task::cube;
  if (s == "temperature") return Task::temperature;
  if (s == "wine") return Task::wine;
  throw std::invalid_argument("unknown task '" + std::string(s) + "'");
}

ModelKind parse_model_kind(std::string_view s) {
  if (s == "kan") return ModelKind::kan;
  if (s == "mlp") return ModelKind::mlp;
  throw std::invalid_argument("unknown model '" + std::string(s) + "'");
}

std::size_t ExperimentConfig::task_input_dim() const noexcept {
  switch (task) {
    case Task::square:
    case Task::cube: return 1;
    case Task::temperature: return window;
    case Task::wine: return 13;
  }
  return 1;
}

std::size_t ExperimentConfig::task_output_dim() const noexcept { return task == Task::wine ? 3 : 1; }

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out{
      {"name", name},
      {"task", std::string(to_string(task))},
      {"model", std::string(to_string(model))},
      {"arch", format_arch(arch)},
  };
  if (model == ModelKind::kan) {
    out.emplace_back("grid", std::to_string(grid));
    out.emplace_back("degree", std::to_string(degree));
    out.emplace_back("grid_update", train.grid_update ? "on" : "off");
  } else {
    out.emplace_back("hidden_activation", std::string(to_string(hidden_activation)));
  }
  out.emplace_back("epochs", std::to_string(train.epochs));
  out.emplace_back("batch_size", std::to_string(train.batch_size));
  out.emplace_back("lr", fmt_real(train.lr));
  out.emplace_back("lr_decay", fmt_real(train.lr_decay));
  out.emplace_back("seed", std::to_string(train.seed));
  out.emplace_back("test_fraction", fmt_real(test_fraction));
  if (task == Task::square || task == Task::cube) out.emplace_back("rows", std::to_string(rows));
  if (task == Task::temperature) out.emplace_back("window", std::to_string(window));
  if (!data_path.empty()) out.emplace_back("data", data_path);
  return out;
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  Entries entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!known_keys().contains(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
    if (!entries.emplace(key, Entry{value, line_no}).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return build(entries, base_dir);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  try {
    return parse_config(in, path.parent_path());
  } catch (const ConfigError& ex) {
    throw ConfigError(path.string() + ": " + ex.what());
  }
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (!known_keys().contains(key)) throw ConfigError("unknown key '" + key + "'");
  Entries entries = entries_from_echo(cfg);
  entries[key] = Entry{value, 0};
  cfg = build(entries, {});
}

std::vector<std::size_t> parse_arch(std::string_view text) {
  std::vector<std::size_t> arch;
  std::string item;
  std::istringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    std::size_t v = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || r.ec != std::errc{} || r.ptr != t.data() + t.size() || v == 0) {
      throw std::invalid_argument("bad layer width '" + t + "'");
    }
    arch.push_back(v);
  }
  return arch;
}

std::string format_arch(const std::vector<std::size_t>& arch) {
  std::string out;
  for (std::size_t i = 0; i < arch.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(arch[i]);
  }
  return out;
}

}  // namespace kanbench
