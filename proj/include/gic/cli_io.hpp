#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gic/simulation.hpp"

namespace gic {

/// Malformed or invalid configuration file. what() names the file and, for
/// syntax errors, the line and column.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RobotModel load_robot_model(const std::filesystem::path& path);
RobotModel parse_robot_model(const std::string& text, const std::string& source = "<string>");

/// Overrides applied on top of a scenario file.
struct RunConfig {
  std::string scenario = "regulation";  // path or bundled name
  std::vector<std::string> controllers;
  std::optional<std::filesystem::path> out;
  std::optional<double> dt;
  std::optional<double> duration;
  std::optional<double> kp;
  std::optional<double> ko;
  std::optional<double> kd;
  std::optional<double> lambda_g;
};

/// "regulation" / "tracking" resolve to the bundled scenario files.
std::filesystem::path resolve_scenario_path(const std::string& path_or_name);
/// Looks next to the scenario file, then in $GIC_MODEL_DIR, then in the bundled models.
std::filesystem::path resolve_model_path(const std::string& model, const std::filesystem::path& scenario_dir);

Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text, const std::filesystem::path& scenario_dir,
                        const std::string& source = "<string>");
void apply_overrides(Scenario& scenario, const RunConfig& config);

std::vector<std::string> trace_csv_header(int dof);
void write_trace_csv(const Trace& trace, std::ostream& out);
void write_trace_csv(const Trace& trace, const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// RMS rows (x, y, z, Psi and, for tracking traces, Phi), one column per entry in order.
std::string summary_table(const std::vector<std::pair<std::string, TraceSummary>>& columns,
                          bool tracking);
std::string summary_table(const std::vector<Trace>& traces);

}  // namespace gic
