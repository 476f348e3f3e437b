#include "dyncov/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dyncov/analytic.hpp"

namespace dyncov::game {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double payoff_from_effective_speed(double eff, const GameParams& p) {
  const double rate = 2.0 * p.density * p.radius * eff;
  return rate > 0.0 ? 1.0 / rate : kInf;
}

double golden_min(double lo, double hi, double rel_tol, const auto& f) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > rel_tol * (std::abs(a) + std::abs(b) + 1.0)) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Effective-speed evaluator on the search grid. The smooth part of the law is
// tabulated once at N quadrature nodes with N a multiple of the angle grid,
// so that each (theta_t, v_t) cell costs one cyclic Simpson dot product
// instead of a fresh quadrature.
class GridEvaluator {
 public:
  GridEvaluator(const DirectionDistribution& law, const GameParams& params,
                const GridSpec& grid)
      : law_(law), params_(params), n_angles_(std::max(1, grid.n_angles)) {
    if (law_.has_smooth()) {
      stride_ = std::max<std::size_t>(1, (2048 + n_angles_ - 1) / n_angles_);
      if ((stride_ * n_angles_) % 2 != 0) ++stride_;
      n_nodes_ = stride_ * n_angles_;
      const double h = kTwoPi / static_cast<double>(n_nodes_);
      density_.resize(n_nodes_);
      for (std::size_t j = 0; j < n_nodes_; ++j)
        density_[j] = law_.density(static_cast<double>(j) * h);
      weighted_w_.resize(n_nodes_ + 1);
    }
  }

  /// Tabulate w for one intruder speed; must precede eval() at that speed.
  void set_speed(double v_t) {
    c_ = v_t / params_.sensor_speed;
    if (!law_.has_smooth()) return;
    const double h = kTwoPi / static_cast<double>(n_nodes_);
    for (std::size_t j = 0; j <= n_nodes_; ++j) {
      const double w = analytic::relative_speed_factor(static_cast<double>(j) * h, c_);
      const double simpson = (j == 0 || j == n_nodes_) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      weighted_w_[j] = simpson * w;
    }
  }

  /// Effective speed at angle-grid index `a` for the speed set above.
  double eval(std::size_t a) const {
    double integral = 0.0;
    const double theta_t =
        static_cast<double>(a) * kTwoPi / static_cast<double>(n_angles_);
    for (const auto& atom : law_.atoms())
      integral += atom.weight * analytic::relative_speed_factor(atom.angle - theta_t, c_);
    if (law_.has_smooth()) {
      const std::size_t shift = a * stride_;  // < n_nodes_ since a < n_angles_
      const std::size_t split = n_nodes_ - shift;
      double sum = 0.0;
      for (std::size_t j = 0; j < split; ++j) sum += weighted_w_[j] * density_[j + shift];
      for (std::size_t j = split; j < n_nodes_; ++j)
        sum += weighted_w_[j] * density_[j + shift - n_nodes_];
      sum += weighted_w_[n_nodes_] * density_[shift];
      integral += sum * kTwoPi / (3.0 * static_cast<double>(n_nodes_));
    }
    return params_.sensor_speed * (1.0 + c_) * integral;
  }

 private:
  const DirectionDistribution& law_;
  const GameParams& params_;
  std::size_t n_angles_;
  std::size_t stride_ = 0;
  std::size_t n_nodes_ = 0;
  double c_ = 0.0;
  std::vector<double> density_;
  std::vector<double> weighted_w_;
};

}  // namespace

bool BestResponse::undetectable() const { return !std::isfinite(expected_time); }

double profile_payoff(const StrategyProfile& profile, const GameParams& params) {
  const double eff = analytic::effective_speed(profile.sensor_strategy,
                                               profile.intruder_direction,
                                               profile.intruder_speed, params.sensor_speed);
  return payoff_from_effective_speed(eff, params);
}

BestResponse best_response_intruder(const DirectionDistribution& sensor_law,
                                    const GameParams& params, const GridSpec& grid) {
  if (params.sensor_speed <= 0.0)
    throw std::invalid_argument("best_response_intruder: sensor speed must be > 0");
  if (params.intruder_speed_max < 0.0)
    throw std::invalid_argument("best_response_intruder: v_t_max must be >= 0");

  const int n_angles = std::max(1, grid.n_angles);
  const int n_speeds = std::max(1, grid.n_speeds);
  const double v_max = params.intruder_speed_max;
  const double v_step = n_speeds > 1 ? v_max / (n_speeds - 1) : 0.0;
  const double a_step = kTwoPi / n_angles;

  GridEvaluator evaluator(sensor_law, params, grid);
  double best_eff = kInf;
  double best_theta = 0.0, best_v = 0.0;
  for (int m = 0; m < n_speeds; ++m) {
    const double v_t = n_speeds > 1 ? v_step * m : 0.0;
    evaluator.set_speed(v_t);
    for (int a = 0; a < n_angles; ++a) {
      const double eff = evaluator.eval(static_cast<std::size_t>(a));
      if (eff < best_eff) {
        best_eff = eff;
        best_theta = a * a_step;
        best_v = v_t;
      }
    }
  }

  // Exact probes at the pure directions: the co-moving null (theta_s, v_s)
  // lies between grid points in general but is analytically available.
  for (const auto& atom : sensor_law.atoms()) {
    const double v_t = std::min(v_max, params.sensor_speed);
    const double eff =
        analytic::effective_speed(sensor_law, atom.angle, v_t, params.sensor_speed);
    if (eff < best_eff) {
      best_eff = eff;
      best_theta = atom.angle;
      best_v = v_t;
    }
  }

  // Coordinate-wise golden-section refinement; keep the refined point only if
  // it actually improves on the incumbent.
  const auto objective = [&](double theta, double v_t) {
    return analytic::effective_speed(sensor_law, theta, v_t, params.sensor_speed);
  };
  for (int round = 0; round < 2; ++round) {
    const double theta = golden_min(best_theta - a_step, best_theta + a_step,
                                    grid.refine_rel_tol,
                                    [&](double th) { return objective(th, best_v); });
    double eff = objective(theta, best_v);
    if (eff < best_eff) {
      best_eff = eff;
      best_theta = wrap_angle(theta);
    }
    if (v_max > 0.0) {
      const double lo = std::max(0.0, best_v - (n_speeds > 1 ? v_step : v_max));
      const double hi = std::min(v_max, best_v + (n_speeds > 1 ? v_step : v_max));
      const double v = golden_min(lo, hi, grid.refine_rel_tol,
                                  [&](double vv) { return objective(best_theta, vv); });
      eff = objective(best_theta, v);
      if (eff < best_eff) {
        best_eff = eff;
        best_v = v;
      }
    }
  }

  return BestResponse{best_theta, best_v, best_eff,
                      payoff_from_effective_speed(best_eff, params)};
}

double minimax_value(const DirectionDistribution& sensor_law, const GameParams& params,
                     const GridSpec& grid) {
  return best_response_intruder(sensor_law, params, grid).expected_time;
}

EquilibriumReport equilibrium_check(const GameParams& params,
                                    const std::vector<DirectionDistribution>& law_family,
                                    const GridSpec& grid) {
  if (law_family.empty())
    throw std::invalid_argument("equilibrium_check: empty law family");
  EquilibriumReport report;
  report.uniform_index = law_family.size();
  for (std::size_t i = 0; i < law_family.size(); ++i) {
    report.values.push_back({law_family[i].label(),
                             best_response_intruder(law_family[i], params, grid)});
    if (law_family[i].is_uniform() && report.uniform_index == law_family.size())
      report.uniform_index = i;
  }
  if (report.uniform_index == law_family.size())
    throw std::invalid_argument("equilibrium_check: family must include the uniform law");

  const double uniform_min_eff =
      report.values[report.uniform_index].response.min_effective_speed;
  double best_other = -kInf;
  for (std::size_t i = 0; i < report.values.size(); ++i) {
    if (i == report.uniform_index) continue;
    best_other = std::max(best_other, report.values[i].response.min_effective_speed);
  }
  report.uniform_margin =
      report.values.size() > 1 ? uniform_min_eff - best_other : kInf;
  report.uniform_is_optimal = report.values.size() == 1 || report.uniform_margin > 0.0;

  const double v_step =
      grid.n_speeds > 1 ? params.intruder_speed_max / (grid.n_speeds - 1) : 0.0;
  report.uniform_best_response_speed =
      report.values[report.uniform_index].response.intruder_speed;
  report.stationary_is_best_response =
      report.uniform_best_response_speed <= v_step + 1e-9;
  return report;
}

}  // namespace dyncov::game
