#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli/experiment_config.hpp"

namespace dyncov::cli {

/// One verified claim: the comparison data plus a verdict.
struct Check {
  std::string name;
  bool pass;
  json detail;
};

/// Raw samples/estimates destined for the samples file.
struct SampleTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;  // RFC 4180, CRLF line endings
  json to_json() const;
};

struct ScenarioResult {
  ExperimentConfig resolved;
  json results;
  std::vector<Check> checks;
  SampleTable samples;

  bool pass() const;
  json summary() const;
};

const std::vector<std::string>& scenario_names();

/// Runs one scenario; throws ConfigError on invalid configuration.
ScenarioResult run_scenario(const ExperimentConfig& config);

/// Runs, writes <dir>/<scenario>_samples.<fmt> and <dir>/<scenario>_summary.json,
/// logs one verdict line per check. Returns the process exit status
/// (0 iff all checks pass).
int run_and_write(const ExperimentConfig& config, std::ostream& log);

std::string format_number(double v);

}  // namespace dyncov::cli
