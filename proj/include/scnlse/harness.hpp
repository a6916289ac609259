#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "scnlse/experiments.hpp"

namespace scnlse {

/// Names accepted in the "scenario" field.
const std::vector<std::string>& scenario_names();

struct OutputOptions {
  std::string directory = "out";
  bool snapshots = true;
  bool plotdata = true;
};

struct SolitonScenario {
  PropagationSetup setup;
};

using ScenarioSetup = std::variant<SolitonScenario, EhrenfestSetup, ResidualScalingSetup, ConcentrationSetup,
                                   IdentitySetup, CylindricalSetup>;

struct ExperimentConfig {
  std::string scenario;
  ScenarioSetup setup;
  OutputOptions output;
};

/// Validates a config document against its scenario schema. Unknown keys,
/// missing required values and out-of-range values raise ConfigError with
/// the dot path of the field.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Reads and parses a JSON file; parse errors carry the file path.
nlohmann::json load_config_file(const std::string& path);

/// Applies "a.b.c=value". The value is parsed as JSON when possible and
/// taken as a string otherwise; missing intermediate objects are created.
void apply_override(nlohmann::json& doc, const std::string& assignment);

struct ReportRow {
  std::string scenario;
  std::string case_id;
  std::string metric;
  double value = 0.0;
  std::string tolerance;  // human-readable bound, "report" when informational
  bool pass = true;
};

struct OutputFile {
  std::string path;  // relative to the output directory
  std::string content;
};

struct ScenarioOutput {
  std::vector<ReportRow> rows;
  std::vector<OutputFile> files;
  std::vector<std::pair<std::string, double>> timings;  // label, seconds
  std::vector<std::string> errors;                       // messages behind failing "scenario_error" rows

  bool all_pass() const;
};

/// Row that must be present for an acceptance criterion; an empty case id
/// matches any case.
struct AcceptanceMetric {
  std::string criterion;
  std::string scenario;
  std::string case_id;
  std::string metric;
};
const std::vector<AcceptanceMetric>& acceptance_metrics();

/// Runs a validated scenario. Numerical failures inside the scenario become
/// a failing "scenario_error" row. In a run that completed, a mapped
/// acceptance row that was not produced becomes a failing "missing:<metric>" row.
ScenarioOutput run_scenario(const ExperimentConfig& config);

/// Writes results.csv, timing.csv and every generated file below
/// `directory`. Throws if there are no rows or a file cannot be written.
void emit(const ScenarioOutput& output, const std::string& directory);

/// printf "%.17g": 17 significant digits, exact round trip for doubles.
std::string format_number(double v);

std::string results_csv(const std::vector<ReportRow>& rows);

}  // namespace scnlse
