// Command-line front end: run, validate and list the named scenarios.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scnlse/error.hpp"
#include "scnlse/harness.hpp"

namespace {

nlohmann::json load_with_overrides(const std::string& path, const std::vector<std::string>& overrides) {
  nlohmann::json doc = scnlse::load_config_file(path);
  for (const auto& o : overrides) scnlse::apply_override(doc, o);
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical NLSE solitary waves: scenario runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "Run a scenario and write results.csv, plotdata/ and snapshots/");
  run->add_option("config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory (default: output.directory from the config)");
  run->add_option("--override", overrides, "Dot-path override key=value, repeatable");

  auto* validate = app.add_subcommand("validate", "Check a config against its scenario schema");
  validate->add_option("config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  validate->add_option("--override", overrides, "Dot-path override key=value, repeatable");

  auto* list = app.add_subcommand("list-scenarios", "Print the scenario names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& s : scnlse::scenario_names()) std::printf("%s\n", s.c_str());
      return 0;
    }
    const scnlse::ExperimentConfig cfg = scnlse::parse_config(load_with_overrides(config_path, overrides));
    if (validate->parsed()) {
      std::printf("ok: %s\n", cfg.scenario.c_str());
      return 0;
    }
    const scnlse::ScenarioOutput out = scnlse::run_scenario(cfg);
    const std::string dir = out_dir.empty() ? cfg.output.directory : out_dir;
    scnlse::emit(out, dir);
    int failed = 0;
    for (const auto& r : out.rows) {
      if (r.pass) continue;
      ++failed;
      std::fprintf(stderr, "FAIL %s %s = %s (%s)\n", r.case_id.c_str(), r.metric.c_str(),
                   scnlse::format_number(r.value).c_str(), r.tolerance.c_str());
    }
    for (const auto& e : out.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
    std::printf("%s: %zu rows, %d failed, written to %s\n", cfg.scenario.c_str(), out.rows.size(), failed, dir.c_str());
    return out.all_pass() ? 0 : 1;
  } catch (const scnlse::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
