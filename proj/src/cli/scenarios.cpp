#include "cli/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "dyncov/analytic.hpp"
#include "dyncov/game.hpp"
#include "dyncov/sim.hpp"
#include "dyncov/stats.hpp"

namespace dyncov::cli {

namespace {

namespace an = dyncov::analytic;
namespace sm = dyncov::sim;

std::string fmt_int(std::int64_t v) { return std::to_string(v); }

json check_detail(double observed, double expected, double tolerance) {
  return json{{"observed", observed}, {"expected", expected}, {"tolerance", tolerance}};
}

Check abs_check(const std::string& name, double observed, double expected, double tol) {
  Check c{name, std::abs(observed - expected) <= tol, check_detail(observed, expected, tol)};
  return c;
}

Check rel_check(const std::string& name, double observed, double expected, double rel_tol) {
  Check c{name, std::abs(observed - expected) <= rel_tol * std::abs(expected),
          check_detail(observed, expected, rel_tol)};
  c.detail["tolerance_kind"] = "relative";
  return c;
}

double fixed_sensor_speed(const ExperimentConfig& cfg, const char* scenario) {
  const auto law = speed_law_from_json(cfg.speed_spec, "network.speed");
  if (!std::holds_alternative<SpeedDistribution::Fixed>(law.variant()))
    throw ConfigError(std::string("network.speed: scenario '") + scenario +
                      "' requires a fixed sensor speed");
  return std::get<SpeedDistribution::Fixed>(law.variant()).value;
}

struct DetectionRun {
  std::vector<double> uncensored;
  std::int64_t censored = 0;
  stats::MeanEstimate mean{0.0, 0.0, 0};
};

DetectionRun run_detection(const NetworkConfig& net, const IntruderSpec& intruder,
                           double horizon, int reps, std::uint64_t seed,
                           const sm::MobilityModel& mobility, SampleTable* table,
                           const std::string& metric = "") {
  auto samples = sm::run_replications<sm::DetectionSample>(
      reps, seed,
      [&](int, Rng& rng) { return sm::sample_detection_time(net, intruder, horizon, rng, mobility); });
  DetectionRun run;
  for (int i = 0; i < reps; ++i) {
    const sm::DetectionSample& s = samples[static_cast<std::size_t>(i)];
    if (table) {
      std::vector<std::string> row;
      if (!metric.empty()) row.push_back(metric);
      row.push_back(fmt_int(i));
      row.push_back(format_number(s.value));
      row.push_back(s.censored ? "1" : "0");
      table->rows.push_back(std::move(row));
    }
    if (s.censored)
      ++run.censored;
    else
      run.uncensored.push_back(s.value);
  }
  if (run.uncensored.size() >= 2) run.mean = stats::mean_se(run.uncensored);
  return run;
}

// Aggregates per-replication fractions; the replication spread is the right
// standard error here because points within one configuration are correlated
// through the shared sensor process.
struct FractionAggregate {
  double estimate;
  double std_error;
  std::int64_t covered;
  std::int64_t total;
  std::vector<double> per_rep;
};

FractionAggregate aggregate_fractions(const std::vector<sm::FractionEstimate>& reps) {
  FractionAggregate agg{0.0, 0.0, 0, 0, {}};
  for (const auto& r : reps) {
    agg.covered += r.covered;
    agg.total += r.total;
    agg.per_rep.push_back(r.fraction);
  }
  agg.estimate = static_cast<double>(agg.covered) / static_cast<double>(agg.total);
  const auto m = stats::mean_se(agg.per_rep);
  agg.std_error = m.std_error;
  return agg;
}

json fraction_json(const FractionAggregate& agg) {
  return json{{"estimate", agg.estimate},
              {"std_error", agg.std_error},
              {"covered", agg.covered},
              {"total", agg.total}};
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

ScenarioResult scenario_area_coverage(ExperimentConfig cfg) {
  if (cfg.replications == 0) cfg.replications = 100;
  if (cfg.test_points == 0) cfg.test_points = 2000;
  if (cfg.times.empty()) cfg.times = {0.0, 1.0, 5.0};
  if (cfg.horizon == 0.0) cfg.horizon = *std::max_element(cfg.times.begin(), cfg.times.end());

  const NetworkConfig net = cfg.network();
  const auto window = sm::SimulationWindow::make(net, cfg.horizon, cfg.window_side);
  const double predicted = an::area_coverage(cfg.density, cfg.radius);

  auto reps = sm::run_replications<std::vector<sm::FractionEstimate>>(
      cfg.replications, cfg.seed, [&](int, Rng& rng) {
        return sm::estimate_area_coverage_at(net, window, cfg.times, cfg.test_points, rng);
      });

  ScenarioResult out;
  out.samples.columns = {"replicate", "time", "covered", "total", "fraction"};
  json per_time = json::array();
  std::vector<FractionAggregate> aggs;
  for (std::size_t k = 0; k < cfg.times.size(); ++k) {
    std::vector<sm::FractionEstimate> slice;
    for (const auto& rep : reps) slice.push_back(rep[k]);
    aggs.push_back(aggregate_fractions(slice));
    json entry = fraction_json(aggs.back());
    entry["time"] = cfg.times[k];
    per_time.push_back(entry);
    out.checks.push_back(abs_check("area_coverage_t=" + format_number(cfg.times[k]),
                                   aggs.back().estimate, predicted,
                                   cfg.tolerances.fraction_abs));
  }
  for (int i = 0; i < cfg.replications; ++i) {
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
      const auto& est = reps[static_cast<std::size_t>(i)][k];
      out.samples.rows.push_back({fmt_int(i), format_number(cfg.times[k]),
                                  fmt_int(est.covered), fmt_int(est.total),
                                  format_number(est.fraction)});
    }
  }

  // Stationarity: each replication observes the same configuration at the
  // first and last query times, so the differences are paired.
  if (cfg.times.size() >= 2) {
    std::vector<double> diffs;
    for (const auto& rep : reps) diffs.push_back(rep.front().fraction - rep.back().fraction);
    const auto d = stats::mean_se(diffs);
    const double bound = cfg.tolerances.se_multiple * d.std_error;
    Check c{"time_invariance", std::abs(d.mean) < bound,
            json{{"observed", d.mean}, {"bound", bound}}};
    out.checks.push_back(std::move(c));
  }

  out.results = json{{"analytic", predicted}, {"per_time", per_time}};
  out.resolved = std::move(cfg);
  return out;
}

// With a turn_interval configured the tracks are piecewise, and the check
// flips from equality with the straight-line form to the one-sided
// optimality bound.
ScenarioResult scenario_interval_coverage(ExperimentConfig cfg) {
  if (cfg.replications == 0) cfg.replications = 100;
  if (cfg.test_points == 0) cfg.test_points = 2000;
  if (cfg.horizon == 0.0) cfg.horizon = cfg.interval;
  const bool piecewise = cfg.turn_interval > 0.0;

  const NetworkConfig net = cfg.network();
  const auto window = sm::SimulationWindow::make(net, cfg.horizon, cfg.window_side);
  const sm::MobilityModel mobility = piecewise
                                         ? sm::MobilityModel::redraw_every(cfg.turn_interval)
                                         : sm::MobilityModel::straight();
  const double predicted = an::interval_coverage_straight(
      cfg.density, cfg.radius, net.speed_law.mean(), cfg.interval);

  auto reps = sm::run_replications<sm::FractionEstimate>(
      cfg.replications, cfg.seed, [&](int, Rng& rng) {
        return sm::estimate_interval_coverage(net, window, cfg.interval, cfg.test_points, rng,
                                              mobility);
      });
  const auto agg = aggregate_fractions(reps);

  ScenarioResult out;
  out.samples.columns = {"replicate", "covered", "total", "fraction"};
  for (int i = 0; i < cfg.replications; ++i) {
    const auto& est = reps[static_cast<std::size_t>(i)];
    out.samples.rows.push_back(
        {fmt_int(i), fmt_int(est.covered), fmt_int(est.total), format_number(est.fraction)});
  }
  out.results = json{{"analytic_straight", predicted}, {"empirical", fraction_json(agg)}};

  if (!piecewise) {
    out.checks.push_back(abs_check("interval_coverage", agg.estimate, predicted,
                                   cfg.tolerances.fraction_abs));
  } else {
    // Straight-line optimality: the piecewise estimate must not significantly
    // exceed the straight-line value.
    const double slack = cfg.tolerances.se_multiple * agg.std_error;
    const bool not_above = agg.estimate <= predicted + slack;
    const bool separated = agg.estimate <= predicted - slack;
    Check c{"piecewise_not_above_straight", not_above,
            json{{"observed", agg.estimate},
                 {"expected_max", predicted},
                 {"slack", slack},
                 {"separated", separated},
                 {"flagged_equality", not_above && !separated}}};
    out.checks.push_back(std::move(c));
    out.results["separated"] = separated;
  }
  out.resolved = std::move(cfg);
  return out;
}

ScenarioResult scenario_required_speed(ExperimentConfig cfg) {
  const double fa = an::area_coverage(cfg.density, cfg.radius);
  const std::vector<double> t0s = {0.5, 1.0, 2.0, 3.0, 5.0};
  const int n_f = 10;

  ScenarioResult out;
  out.samples.columns = {"f0", "t0", "required_speed", "roundtrip_error"};
  double max_err = 0.0;
  for (int i = 0; i < n_f; ++i) {
    const double f0 = fa + (i + 0.5) / n_f * (0.999 - fa);
    for (double t0 : t0s) {
      const double v = an::required_speed(cfg.density, cfg.radius, f0, t0);
      const double back = an::interval_coverage_straight(cfg.density, cfg.radius, v, t0);
      const double err = std::abs(back - f0);
      max_err = std::max(max_err, err);
      out.samples.rows.push_back(
          {format_number(f0), format_number(t0), format_number(v), format_number(err)});
    }
  }
  Check c{"required_speed_roundtrip", max_err < cfg.tolerances.roundtrip_abs,
          check_detail(max_err, 0.0, cfg.tolerances.roundtrip_abs)};
  out.checks.push_back(std::move(c));
  out.results = json{{"grid_points", n_f * static_cast<int>(t0s.size())},
                     {"max_roundtrip_error", max_err},
                     {"initial_coverage", fa}};
  out.resolved = std::move(cfg);
  return out;
}

ScenarioResult scenario_detect_static(ExperimentConfig cfg) {
  if (cfg.replications == 0) cfg.replications = 10000;
  cfg.intruder.speed = 0.0;
  cfg.intruder.sensing_time = 0.0;

  const NetworkConfig net = cfg.network();
  const double rate = an::static_detection_law(cfg.density, cfg.radius, net.speed_law.mean()).rate;
  if (rate <= 0.0) throw ConfigError("network: predicted detection rate is 0 (never detected)");
  if (cfg.horizon == 0.0) cfg.horizon = 10.0 / rate;

  ScenarioResult out;
  out.samples.columns = {"replicate", "sample", "censored"};
  const auto run = run_detection(net, cfg.intruder_spec(), cfg.horizon, cfg.replications,
                                 cfg.seed, {}, &out.samples);
  const auto mle = stats::exp_rate_mle(run.uncensored);
  const double ks = stats::ks_exponential(run.uncensored, rate);
  const double ks_crit =
      cfg.tolerances.ks_const / std::sqrt(static_cast<double>(run.uncensored.size()));

  out.checks.push_back(rel_check("detection_rate_mle", mle.rate, rate, cfg.tolerances.rate_rel));
  Check ks_check{"detection_ks_exponential", ks < ks_crit, check_detail(ks, 0.0, ks_crit)};
  out.checks.push_back(std::move(ks_check));
  out.results = json{{"predicted_rate", rate},
                     {"predicted_mean", 1.0 / rate},
                     {"mle_rate", mle.rate},
                     {"mle_ci", json::array({mle.ci_low, mle.ci_high})},
                     {"empirical_mean", run.mean.mean},
                     {"ks_statistic", ks},
                     {"censored", run.censored},
                     {"n_uncensored", static_cast<std::int64_t>(run.uncensored.size())}};
  out.resolved = std::move(cfg);
  return out;
}

ScenarioResult scenario_durations(ExperimentConfig cfg) {
  if (cfg.replications == 0) cfg.replications = 20;
  if (cfg.test_points == 0) cfg.test_points = 100;
  const double speed = fixed_sensor_speed(cfg, "durations");
  const auto law = an::duration_summary(cfg.density, cfg.radius, speed);
  const double rate = 1.0 / law.mean_uncovered;
  if (cfg.horizon == 0.0) cfg.horizon = 50.0;
  const double cutoff = cfg.horizon - 15.0 / rate;
  if (cutoff <= 0.0)
    throw ConfigError("horizon: too short for complete-duration collection (needs > 15/rate)");

  const NetworkConfig net = cfg.network();
  const auto window = sm::SimulationWindow::make(net, cfg.horizon, cfg.window_side);
  auto reps = sm::run_replications<sm::DurationStudy>(
      cfg.replications, cfg.seed, [&](int, Rng& rng) {
        return sm::duration_study(net, window, cfg.test_points, cutoff, rng);
      });

  ScenarioResult out;
  out.samples.columns = {"replicate", "kind", "duration"};
  std::vector<double> gaps, covered, fractions;
  for (int i = 0; i < cfg.replications; ++i) {
    const auto& study = reps[static_cast<std::size_t>(i)];
    for (double g : study.uncovered) {
      gaps.push_back(g);
      out.samples.rows.push_back({fmt_int(i), "uncovered", format_number(g)});
    }
    for (double cvd : study.covered) {
      covered.push_back(cvd);
      out.samples.rows.push_back({fmt_int(i), "covered", format_number(cvd)});
    }
    fractions.push_back(study.covered_time / study.observed_time);
  }
  const auto gap_mle = stats::exp_rate_mle(gaps);
  const auto covered_mean = stats::mean_se(covered);
  const auto frac = stats::mean_se(fractions);
  const double fa = an::area_coverage(cfg.density, cfg.radius);

  out.checks.push_back(rel_check("uncovered_gap_rate", gap_mle.rate, rate,
                                 cfg.tolerances.rate_rel));
  out.checks.push_back(rel_check("covered_duration_mean", covered_mean.mean, law.mean_covered,
                                 cfg.tolerances.mean_rel));
  out.checks.push_back(abs_check("covered_time_fraction", frac.mean, fa,
                                 cfg.tolerances.fraction_abs));
  out.results = json{{"predicted",
                      json{{"mean_uncovered", law.mean_uncovered},
                           {"mean_covered", law.mean_covered},
                           {"mean_cycle", law.mean_cycle},
                           {"covered_fraction", fa}}},
                     {"gap_rate_mle", gap_mle.rate},
                     {"gap_count", gap_mle.n},
                     {"covered_mean", covered_mean.mean},
                     {"covered_count", covered_mean.n},
                     {"covered_fraction", frac.mean},
                     {"covered_fraction_se", frac.std_error}};
  out.resolved = std::move(cfg);
  return out;
}

ScenarioResult scenario_detect_sensing_time(ExperimentConfig cfg) {
  if (cfg.replications == 0) cfg.replications = 10000;
  if (cfg.intruder.sensing_time == 0.0) cfg.intruder.sensing_time = 0.6;
  cfg.intruder.speed = 0.0;
  const double speed = fixed_sensor_speed(cfg, "detect-sensing-time");

  an::SensingTimeLaw law{0, 0, 0, 0};
  try {
    law = an::sensing_time_law(cfg.density, cfg.radius, speed, cfg.intruder.sensing_time);
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("intruder.sensing_time: ") + e.what());
  }
  if (cfg.horizon == 0.0) cfg.horizon = cfg.intruder.sensing_time + 10.0 / law.rate;

  const NetworkConfig net = cfg.network();
  ScenarioResult out;
  out.samples.columns = {"replicate", "sample", "censored"};
  const auto run = run_detection(net, cfg.intruder_spec(), cfg.horizon, cfg.replications,
                                 cfg.seed, {}, &out.samples);
  std::vector<double> shifted;
  for (double y : run.uncensored)
    shifted.push_back(std::max(y - cfg.intruder.sensing_time,
                               std::numeric_limits<double>::min()));
  const double ks = stats::ks_exponential(shifted, law.rate);
  const double ks_crit = cfg.tolerances.ks_const / std::sqrt(static_cast<double>(shifted.size()));

  out.checks.push_back(rel_check("sensing_time_mean", run.mean.mean, law.mean,
                                 cfg.tolerances.mean_rel));
  Check ks_check{"shifted_ks_exponential", ks < ks_crit, check_detail(ks, 0.0, ks_crit)};
  out.checks.push_back(std::move(ks_check));
  out.results = json{{"effective_radius", law.effective_radius},
                     {"predicted_rate", law.rate},
                     {"predicted_mean", law.mean},
                     {"empirical_mean", run.mean.mean},
                     {"ks_statistic", ks},
                     {"censored", run.censored}};
  out.resolved = std::move(cfg);
  return out;
}

ScenarioResult scenario_optimal_speed_sweep(ExperimentConfig cfg) {
  if (cfg.replications == 0) cfg.replications = 10000;
  if (cfg.intruder.sensing_time == 0.0) cfg.intruder.sensing_time = 0.6;
  cfg.intruder.speed = 0.0;
  const double t_d = cfg.intruder.sensing_time;
  const auto optimum = an::optimal_speed(cfg.density, cfg.radius, t_d);
  const double step = (cfg.sweep.hi - cfg.sweep.lo) / (cfg.sweep.count + 1);

  ScenarioResult out;
  out.samples.columns = {"v_s", "n", "censored", "mean", "std_error"};
  const DirectionDistribution directions =
      direction_law_from_json(cfg.direction_spec, "network.direction");

  double best_mean = std::numeric_limits<double>::infinity();
  double best_speed = 0.0;
  json sweep_results = json::array();
  for (int k = 0; k < cfg.sweep.count; ++k) {
    const double v = cfg.sweep.lo + step * (k + 1);
    const auto law = an::sensing_time_law(cfg.density, cfg.radius, v, t_d);
    const double horizon = t_d + 10.0 / law.rate;
    const NetworkConfig net(cfg.density, cfg.radius, SpeedDistribution::fixed(v), directions);
    const auto run =
        run_detection(net, IntruderSpec::stationary(t_d), horizon, cfg.replications,
                      replication_seed(cfg.seed, static_cast<std::uint64_t>(k)), {}, nullptr);
    if (run.mean.mean < best_mean) {
      best_mean = run.mean.mean;
      best_speed = v;
    }
    out.samples.rows.push_back({format_number(v), fmt_int(run.mean.n), fmt_int(run.censored),
                                format_number(run.mean.mean), format_number(run.mean.std_error)});
    sweep_results.push_back(json{{"v_s", v},
                                 {"empirical_mean", run.mean.mean},
                                 {"std_error", run.mean.std_error},
                                 {"analytic_mean", law.mean}});
  }

  out.checks.push_back(abs_check("empirical_argmin_speed", best_speed, optimum.speed, step));
  out.checks.push_back(abs_check(
      "analytic_mean_at_optimum",
      an::sensing_time_law(cfg.density, cfg.radius, optimum.speed, t_d).mean,
      optimum.mean_at_optimum, cfg.tolerances.identity_abs));
  out.results = json{{"optimal_speed", optimum.speed},
                     {"mean_at_optimum", optimum.mean_at_optimum},
                     {"empirical_argmin", best_speed},
                     {"grid_step", step},
                     {"sweep", sweep_results}};
  out.resolved = std::move(cfg);
  return out;
}

ScenarioResult scenario_detect_mobile(ExperimentConfig cfg) {
  if (cfg.replications == 0) cfg.replications = 10000;
  if (cfg.intruder.speed == 0.0) cfg.intruder.speed = 1.0;
  cfg.intruder.sensing_time = 0.0;
  const double v_s = fixed_sensor_speed(cfg, "detect-mobile");

  const NetworkConfig net = cfg.network();
  const auto eff = an::effective_speed_detailed(net.direction_law, cfg.intruder.direction,
                                                cfg.intruder.speed, v_s);
  const double rate = an::mobile_detection_law(cfg.density, cfg.radius, eff.value).rate;
  if (rate <= 0.0)
    throw ConfigError("intruder: co-moving with the sensors, predicted detection rate is 0");
  if (cfg.horizon == 0.0) cfg.horizon = 10.0 / rate;

  ScenarioResult out;
  out.samples.columns = {"replicate", "sample", "censored"};
  const auto run = run_detection(net, cfg.intruder_spec(), cfg.horizon, cfg.replications,
                                 cfg.seed, {}, &out.samples);
  const double ks = stats::ks_exponential(run.uncensored, rate);
  const double ks_crit =
      cfg.tolerances.ks_const / std::sqrt(static_cast<double>(run.uncensored.size()));

  out.checks.push_back(rel_check("mobile_detection_mean", run.mean.mean, 1.0 / rate,
                                 cfg.tolerances.mean_rel));
  Check ks_check{"mobile_ks_exponential", ks < ks_crit, check_detail(ks, 0.0, ks_crit)};
  out.checks.push_back(std::move(ks_check));
  out.results = json{{"effective_speed", eff.value},
                     {"quadrature_error", eff.quadrature_error},
                     {"predicted_rate", rate},
                     {"predicted_mean", 1.0 / rate},
                     {"empirical_mean", run.mean.mean},
                     {"ks_statistic", ks},
                     {"censored", run.censored}};
  out.resolved = std::move(cfg);
  return out;
}

json response_json(const game::BestResponse& r) {
  json j{{"intruder_direction", r.intruder_direction},
         {"intruder_speed", r.intruder_speed},
         {"min_effective_speed", r.min_effective_speed},
         {"undetectable", r.undetectable()}};
  j["expected_time"] = r.undetectable() ? json("inf") : json(r.expected_time);
  return j;
}

ScenarioResult scenario_game_best_response(ExperimentConfig cfg) {
  const double v_s = fixed_sensor_speed(cfg, "game-best-response");
  const NetworkConfig net = cfg.network();
  const game::GameParams params{cfg.density, cfg.radius, v_s, cfg.intruder.max_speed};
  const game::GridSpec grid{cfg.game.angles, cfg.game.speeds, 1e-6};
  const auto response = game::best_response_intruder(net.direction_law, params, grid);

  ScenarioResult out;
  out.samples.columns = {"intruder_direction", "intruder_speed", "min_effective_speed",
                         "expected_time"};
  out.samples.rows.push_back({format_number(response.intruder_direction),
                              format_number(response.intruder_speed),
                              format_number(response.min_effective_speed),
                              response.undetectable() ? "inf"
                                                      : format_number(response.expected_time)});

  // BestResponse invariant: the reported minimum matches a fresh evaluation.
  const double eval = an::effective_speed(net.direction_law, response.intruder_direction,
                                          response.intruder_speed, v_s);
  out.checks.push_back(abs_check("best_response_consistency", response.min_effective_speed,
                                 eval, 1e-6));

  // Against a single pure direction the optimum is known in closed form.
  if (net.direction_law.atoms().size() == 1 && !net.direction_law.has_smooth()) {
    const double theta_s = net.direction_law.atoms().front().angle;
    const double grid_tol = kTwoPi / cfg.game.angles;
    double angle_diff = std::abs(wrap_angle(response.intruder_direction - theta_s));
    angle_diff = std::min(angle_diff, kTwoPi - angle_diff);
    Check dir_check{"same_direction_angle", angle_diff <= grid_tol,
                    check_detail(response.intruder_direction, theta_s, grid_tol)};
    out.checks.push_back(std::move(dir_check));
    const double v_expect = std::min(cfg.intruder.max_speed, v_s);
    const double v_tol =
        cfg.game.speeds > 1 ? cfg.intruder.max_speed / (cfg.game.speeds - 1) : 1e-9;
    out.checks.push_back(abs_check("same_direction_speed", response.intruder_speed, v_expect,
                                   v_tol));
    if (cfg.intruder.max_speed < v_s) {
      const double payoff =
          1.0 / (2.0 * cfg.density * cfg.radius * (v_s - cfg.intruder.max_speed));
      out.checks.push_back(rel_check("same_direction_payoff", response.expected_time, payoff,
                                     1e-6));
    } else {
      Check undet{"same_direction_undetectable", response.undetectable(),
                  json{{"observed", response.undetectable()}}};
      out.checks.push_back(std::move(undet));
    }
  }
  out.results = json{{"law", net.direction_law.label()}, {"best_response", response_json(response)}};
  out.resolved = std::move(cfg);
  return out;
}

ScenarioResult scenario_game_equilibrium(ExperimentConfig cfg) {
  const double v_s = fixed_sensor_speed(cfg, "game-equilibrium");
  const game::GameParams params{cfg.density, cfg.radius, v_s, cfg.intruder.max_speed};
  const game::GridSpec grid{cfg.game.angles, cfg.game.speeds, 1e-6};
  const auto report = game::equilibrium_check(params, cfg.game_laws(), grid);

  ScenarioResult out;
  out.samples.columns = {"law", "min_effective_speed", "intruder_direction", "intruder_speed",
                         "expected_time"};
  json per_law = json::array();
  for (const auto& lv : report.values) {
    out.samples.rows.push_back(
        {lv.label, format_number(lv.response.min_effective_speed),
         format_number(lv.response.intruder_direction), format_number(lv.response.intruder_speed),
         lv.response.undetectable() ? "inf" : format_number(lv.response.expected_time)});
    json entry = response_json(lv.response);
    entry["law"] = lv.label;
    per_law.push_back(entry);
  }

  Check margin_check{"uniform_maximizes_min_effective_speed",
                     report.uniform_is_optimal &&
                         report.uniform_margin > cfg.tolerances.equilibrium_margin,
                     json{{"margin", report.uniform_margin},
                          {"required_margin", cfg.tolerances.equilibrium_margin}}};
  out.checks.push_back(std::move(margin_check));
  const double v_step =
      cfg.game.speeds > 1 ? cfg.intruder.max_speed / (cfg.game.speeds - 1) : 1e-9;
  out.checks.push_back(abs_check("uniform_best_response_stationary",
                                 report.uniform_best_response_speed, 0.0, v_step));
  out.results = json{{"per_law", per_law},
                     {"uniform_margin", report.uniform_margin},
                     {"uniform_best_response_speed", report.uniform_best_response_speed}};
  out.resolved = std::move(cfg);
  return out;
}

ScenarioResult scenario_straightline_optimality(ExperimentConfig cfg) {
  if (cfg.turn_interval == 0.0) cfg.turn_interval = 0.2;
  if (cfg.replications == 0) cfg.replications = 100;
  if (cfg.test_points == 0) cfg.test_points = 2000;
  const int detect_reps = 4000;
  const double v_s = fixed_sensor_speed(cfg, "straightline-optimality");

  const NetworkConfig net = cfg.network();
  const sm::MobilityModel piecewise = sm::MobilityModel::redraw_every(cfg.turn_interval);

  ScenarioResult out;
  out.samples.columns = {"metric", "replicate", "value", "censored"};

  // Interval coverage: piecewise must not exceed the straight-line value.
  const double fi = an::interval_coverage_straight(cfg.density, cfg.radius, v_s, cfg.interval);
  const auto window = sm::SimulationWindow::make(net, cfg.interval, cfg.window_side);
  auto cover_reps = sm::run_replications<sm::FractionEstimate>(
      cfg.replications, cfg.seed, [&](int, Rng& rng) {
        return sm::estimate_interval_coverage(net, window, cfg.interval, cfg.test_points, rng,
                                              piecewise);
      });
  const auto cover = aggregate_fractions(cover_reps);
  for (int i = 0; i < cfg.replications; ++i)
    out.samples.rows.push_back({"interval_coverage", fmt_int(i),
                                format_number(cover_reps[static_cast<std::size_t>(i)].fraction),
                                "0"});
  const double cover_slack = cfg.tolerances.se_multiple * cover.std_error;
  const bool cover_ok = cover.estimate <= fi + cover_slack;
  const bool cover_sep = cover.estimate <= fi - cover_slack;
  Check cover_check{"piecewise_coverage_not_above_straight", cover_ok,
                    json{{"observed", cover.estimate},
                         {"straight_line", fi},
                         {"slack", cover_slack},
                         {"separated", cover_sep},
                         {"flagged_equality", cover_ok && !cover_sep}}};
  out.checks.push_back(std::move(cover_check));

  // Detection: piecewise sensors must not beat the straight-line mean.
  const double rate = an::static_detection_law(cfg.density, cfg.radius, v_s).rate;
  const double horizon = cfg.horizon > 0.0 ? cfg.horizon : 30.0 / rate;
  const auto run = run_detection(net, IntruderSpec::stationary(), horizon, detect_reps,
                                 replication_seed(cfg.seed, 0x5eed), piecewise, &out.samples,
                                 "detection");
  const double analytic_mean = 1.0 / rate;
  const double det_slack = cfg.tolerances.se_multiple * run.mean.std_error;
  const bool det_ok = run.mean.mean >= analytic_mean - det_slack;
  const bool det_sep = run.mean.mean >= analytic_mean + det_slack;
  Check det_check{"piecewise_detection_not_below_straight", det_ok,
                  json{{"observed", run.mean.mean},
                       {"straight_line", analytic_mean},
                       {"slack", det_slack},
                       {"separated", det_sep},
                       {"flagged_equality", det_ok && !det_sep}}};
  out.checks.push_back(std::move(det_check));

  out.results = json{{"interval_coverage",
                      json{{"empirical_piecewise", cover.estimate},
                           {"std_error", cover.std_error},
                           {"analytic_straight", fi},
                           {"separated", cover_sep}}},
                     {"detection",
                      json{{"empirical_piecewise_mean", run.mean.mean},
                           {"std_error", run.mean.std_error},
                           {"analytic_straight_mean", analytic_mean},
                           {"censored", run.censored},
                           {"separated", det_sep}}}};
  out.resolved = std::move(cfg);
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string SampleTable::to_csv() const {
  std::string text;
  auto append_row = [&text](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      text += row[i];
    }
    text += "\r\n";
  };
  append_row(columns);
  for (const auto& row : rows) append_row(row);
  return text;
}

json SampleTable::to_json() const {
  json arr = json::array();
  for (const auto& row : rows) {
    json obj;
    for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i) obj[columns[i]] = row[i];
    arr.push_back(std::move(obj));
  }
  return arr;
}

bool ScenarioResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

json ScenarioResult::summary() const {
  json doc;
  doc["scenario"] = resolved.scenario;
  doc["seed"] = resolved.seed;
  doc["pass"] = pass();
  json check_arr = json::array();
  for (const Check& c : checks) {
    json entry = c.detail;
    entry["name"] = c.name;
    entry["pass"] = c.pass;
    check_arr.push_back(std::move(entry));
  }
  doc["checks"] = check_arr;
  doc["results"] = results;
  doc["config"] = resolved.to_json();
  return doc;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "area-coverage",     "interval-coverage",  "required-speed",
      "detect-static",     "durations",          "detect-sensing-time",
      "optimal-speed-sweep", "detect-mobile",    "game-best-response",
      "game-equilibrium",  "straightline-optimality"};
  return names;
}

ScenarioResult run_scenario(const ExperimentConfig& config) {
  const std::string& name = config.scenario;
  if (name == "area-coverage") return scenario_area_coverage(config);
  if (name == "interval-coverage") return scenario_interval_coverage(config);
  if (name == "required-speed") return scenario_required_speed(config);
  if (name == "detect-static") return scenario_detect_static(config);
  if (name == "durations") return scenario_durations(config);
  if (name == "detect-sensing-time") return scenario_detect_sensing_time(config);
  if (name == "optimal-speed-sweep") return scenario_optimal_speed_sweep(config);
  if (name == "detect-mobile") return scenario_detect_mobile(config);
  if (name == "game-best-response") return scenario_game_best_response(config);
  if (name == "game-equilibrium") return scenario_game_equilibrium(config);
  if (name == "straightline-optimality") return scenario_straightline_optimality(config);
  throw ConfigError("scenario: unknown scenario '" + name + "'");
}

int run_and_write(const ExperimentConfig& config, std::ostream& log) {
  const ScenarioResult result = run_scenario(config);
  namespace fs = std::filesystem;
  const fs::path dir(result.resolved.output.dir);
  fs::create_directories(dir);

  const std::string stem = result.resolved.scenario;
  const bool csv = result.resolved.output.format == "csv";
  const fs::path samples_path = dir / (stem + (csv ? "_samples.csv" : "_samples.json"));
  {
    std::ofstream samples(samples_path, std::ios::binary);
    if (csv)
      samples << result.samples.to_csv();
    else
      samples << result.samples.to_json().dump(2) << '\n';
  }
  const fs::path summary_path = dir / (stem + "_summary.json");
  {
    std::ofstream summary(summary_path, std::ios::binary);
    summary << result.summary().dump(2) << '\n';
  }

  for (const Check& c : result.checks)
    log << (c.pass ? "[PASS] " : "[FAIL] ") << stem << ": " << c.name << "\n";
  log << (result.pass() ? "PASS" : "FAIL") << " " << stem << " (summary: "
      << summary_path.string() << ")\n";
  return result.pass() ? 0 : 1;
}

}  // namespace dyncov::cli
