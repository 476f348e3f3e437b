#pragma once

#include <string>
#include <vector>

#include "dyncov/model.hpp"

namespace dyncov::game {

/// Fixed quantities of the sensor-vs-intruder game.
struct GameParams {
  double density;
  double radius;
  double sensor_speed;
  double intruder_speed_max;
};

/// Resolution of the best-response search.
struct GridSpec {
  int n_angles = 720;
  int n_speeds = 201;
  double refine_rel_tol = 1e-6;
};

/// A sensor direction law paired with one intruder (speed, direction) choice.
struct StrategyProfile {
  DirectionDistribution sensor_strategy;
  double intruder_speed;
  double intruder_direction;
};

/// Intruder-optimal response to a sensor law. `expected_time` is infinite
/// (undetectable) when the intruder can null the relative speed, e.g. by
/// co-moving with point-mass sensors.
struct BestResponse {
  double intruder_direction;
  double intruder_speed;
  double min_effective_speed;
  double expected_time;

  bool undetectable() const;
};

/// Payoff of one strategy profile: the intruder's expected detection time.
double profile_payoff(const StrategyProfile& profile, const GameParams& params);

/// Grid search over (theta_t, v_t) minimizing the effective sensor speed,
/// refined coordinate-wise by golden-section search. Pure point-mass
/// directions are also probed analytically so the co-moving null is exact.
BestResponse best_response_intruder(const DirectionDistribution& sensor_law,
                                    const GameParams& params, const GridSpec& grid = {});

/// The intruder-optimized expected detection time for a sensor law.
double minimax_value(const DirectionDistribution& sensor_law, const GameParams& params,
                     const GridSpec& grid = {});

struct LawValue {
  std::string label;
  BestResponse response;
};

/// Verifies the equilibrium structure on a finite family of candidate laws:
/// (a) the uniform law maximizes the intruder-minimized effective speed, and
/// (b) the best response against uniform sensors is to stand still.
struct EquilibriumReport {
  std::vector<LawValue> values;
  std::size_t uniform_index;
  double uniform_margin;  // min-eff(uniform) - best competitor
  double uniform_best_response_speed;
  bool uniform_is_optimal;
  bool stationary_is_best_response;

  bool pass() const { return uniform_is_optimal && stationary_is_best_response; }
};

EquilibriumReport equilibrium_check(const GameParams& params,
                                    const std::vector<DirectionDistribution>& law_family,
                                    const GridSpec& grid = {});

}  // namespace dyncov::game
