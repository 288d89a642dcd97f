#include "kanbench/bench/report.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace kanbench {
namespace {

template <typename T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
std::optional<T> get_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

}  // namespace

Json to_json(const RunReport& r) {
  Json j = deterministic_view(r);
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

Json deterministic_view(const RunReport& r) {
  Json j;
  j["schema_version"] = r.schema_version;
  j["name"] = r.name;
  j["task"] = std::string(to_string(r.task));
  j["model"] = std::string(to_string(r.model));
  j["seed"] = r.seed;
  j["status"] = r.status;
  if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
  Json cfg = Json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  j["metric_name"] = r.metric_name;
  j["metric"] = r.metric;
  put_optional(j, "train_mse", r.train_mse);
  put_optional(j, "test_mse", r.test_mse);
  put_optional(j, "train_accuracy", r.train_accuracy);
  put_optional(j, "test_accuracy", r.test_accuracy);
  j["flops"] = r.flops;
  j["kflops"] = r.kflops;
  j["parameter_count"] = r.parameter_count;
  j["epochs_run"] = r.epochs_run;
  j["grid_extensions"] = r.grid_extensions;
  j["initial_train_loss"] = r.initial_train_loss;
  j["final_train_loss"] = r.final_train_loss;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

RunReport report_from_json(const Json& j) {
  RunReport r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version > kReportSchemaVersion) {
    throw std::runtime_error("report schema version " + std::to_string(r.schema_version) +
                             " is newer than this build understands");
  }
  r.name = j.at("name").get<std::string>();
  r.task = parse_task(j.at("task").get<std::string>());
  r.model = parse_model_kind(j.at("model").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.status = j.at("status").get<std::string>();
  r.diagnostics = j.value("diagnostics", std::string{});
  for (const auto& [k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
  r.metric_name = j.at("metric_name").get<std::string>();
  r.metric = j.at("metric").get<double>();
  r.train_mse = get_optional<double>(j, "train_mse");
  r.test_mse = get_optional<double>(j, "test_mse");
  r.train_accuracy = get_optional<double>(j, "train_accuracy");
  r.test_accuracy = get_optional<double>(j, "test_accuracy");
  r.flops = j.at("flops").get<std::int64_t>();
  r.kflops = j.at("kflops").get<double>();
  r.parameter_count = j.value("parameter_count", std::size_t{0});
  r.epochs_run = j.value("epochs_run", std::size_t{0});
  r.grid_extensions = j.value("grid_extensions", std::size_t{0});
  r.initial_train_loss = j.value("initial_train_loss", 0.0);
  r.final_train_loss = j.value("final_train_loss", 0.0);
  if (j.contains("warnings")) r.warnings = j["warnings"].get<std::vector<std::string>>();
  r.wall_seconds = j.value("wall_seconds", 0.0);
  return r;
}

void write_reports(const std::vector<RunReport>& reports, std::ostream& out) {
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  out << arr.dump(2) << '\n';
}

std::vector<RunReport> read_reports(std::istream& in) {
  const Json j = Json::parse(in);
  std::vector<RunReport> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(report_from_json(item));
  } else {
    out.push_back(report_from_json(j));
  }
  return out;
}

std::vector<RunReport> read_reports_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reports '" + path + "'");
  return read_reports(in);
}

void write_reports_csv(const std::vector<RunReport>& reports, std::ostream& out) {
  out << "name,task,model,seed,status,metric_name,metric,train_metric,kflops,flops,epochs,"
         "grid_extensions,wall_seconds\n";
  char buf[512];
  for (const auto& r : reports) {
    const double train_metric =
        r.train_mse ? *r.train_mse : (r.train_accuracy ? *r.train_accuracy : 0.0);
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%llu,%s,%s,%.10g,%.10g,%.3f,%lld,%zu,%zu,%.3f\n",
                  r.name.c_str(), std::string(to_string(r.task)).c_str(),
                  std::string(to_string(r.model)).c_str(), static_cast<unsigned long long>(r.seed),
                  r.status.c_str(), r.metric_name.c_str(), r.metric, train_metric, r.kflops,
                  static_cast<long long>(r.flops), r.epochs_run, r.grid_extensions, r.wall_seconds);
    out << buf;
  }
}

}  // namespace kanbench
