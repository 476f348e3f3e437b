#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyncov/model.hpp"

namespace dyncov::cli {

using json = nlohmann::ordered_json;

/// Raised on malformed configs; the message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntruderConfig {
  double speed = 0.0;
  double direction = 0.0;
  double max_speed = 1.0;
  double sensing_time = 0.0;
};

struct SweepConfig {
  double lo = 0.3;
  double hi = 1.6;
  int count = 15;
};

struct GameConfig {
  int angles = 720;
  int speeds = 201;
  std::vector<json> laws;  // empty = default equilibrium family
};

/// Verdict thresholds; defaults mirror the acceptance gates.
struct Tolerances {
  double fraction_abs = 0.01;
  double rate_rel = 0.03;
  double mean_rel = 0.03;
  double ks_const = 1.63;         // critical D = ks_const / sqrt(n)
  double se_multiple = 3.0;
  double roundtrip_abs = 1e-10;
  double identity_abs = 1e-12;
  double equilibrium_margin = 1e-6;
  double pointmass_abs = 1e-9;
};

struct OutputSpec {
  std::string dir = ".";
  std::string format = "csv";  // samples file: csv | json
};

/// One experiment: scenario name plus every knob it may need. Zero-valued
/// counts/durations mean "use the scenario default"; `resolve_defaults` in
/// the scenario runner fills them in before anything is run or written.
struct ExperimentConfig {
  std::string scenario;
  std::uint64_t seed = 42;
  int replications = 0;
  int test_points = 0;
  double horizon = 0.0;
  double window_side = 0.0;
  double turn_interval = 0.0;

  double density = 1.0;
  double radius = 0.5;
  json speed_spec = json{{"type", "fixed"}, {"value", 1.0}};
  json direction_spec = json{{"type", "uniform"}};

  IntruderConfig intruder;
  std::vector<double> times = {0.0, 1.0, 5.0};
  double interval = 1.0;
  SweepConfig sweep;
  GameConfig game;
  Tolerances tolerances;
  OutputSpec output;

  NetworkConfig network() const;
  IntruderSpec intruder_spec() const;
  std::vector<DirectionDistribution> game_laws() const;

  static ExperimentConfig from_json(const json& doc);
  json to_json() const;
};

SpeedDistribution speed_law_from_json(const json& spec, const std::string& path);
DirectionDistribution direction_law_from_json(const json& spec, const std::string& path);

/// The five-law family used by the default equilibrium check.
std::vector<json> default_equilibrium_family();

ExperimentConfig load_config_file(const std::string& path);

}  // namespace dyncov::cli
