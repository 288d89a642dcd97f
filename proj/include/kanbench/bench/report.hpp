#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "kanbench/bench/experiment.hpp"

namespace kanbench {

using Json = nlohmann::ordered_json;

Json to_json(const RunReport& r);
RunReport report_from_json(const Json& j);

/// JSON without wall-clock fields, for determinism comparisons.
Json deterministic_view(const RunReport& r);

void write_reports(const std::vector<RunReport>& reports, std::ostream& out);
std::vector<RunReport> read_reports(std::istream& in);
std::vector<RunReport> read_reports_file(const std::string& path);

/// One CSV row per report (name,task,model,seed,status,metric_name,metric,
/// train_metric,kflops,flops,epochs,grid_extensions,wall_seconds).
void write_reports_csv(const std::vector<RunReport>& reports, std::ostream& out);

}  // namespace kanbench
