#pragma once

#include <limits>

#include "dyncov/model.hpp"

namespace dyncov::analytic {

/// Instant/interval/time-fraction coverage of the straight-line model.
struct CoverageSummary {
  double instant_fraction;   // f_a
  double interval_fraction;  // f_i over the window, >= f_a
  double time_fraction;      // f_t, equals f_a
};

/// Mean covered/uncovered durations of a point's alternating renewal process.
struct DurationSummary {
  double mean_uncovered;  // E[T_n]
  double mean_covered;    // E[T_c]
  double mean_cycle;      // E[T] = E[T_n] + E[T_c]
};

/// Exponential first-detection law with rate 2*lambda*r*v; rate 0 means the
/// intruder is never detected (survival identically 1, infinite mean).
struct DetectionLaw {
  double rate;

  double survival(double t) const { return std::exp(-rate * t); }
  double mean() const {
    return rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
  }
};

/// Sensing-time model: detection delay t_d plus an exponential with the
/// reduced radius r_eff.
struct SensingTimeLaw {
  double effective_radius;  // sqrt(r^2 - v_s^2 t_d^2 / 4)
  double rate;              // 2*lambda*r_eff*v_s
  double mean;              // t_d + 1/rate
  double sensing_time;      // t_d
};

struct OptimalSpeed {
  double speed;            // sqrt(2)*r/t_d
  double mean_at_optimum;  // (1+2*lambda*r^2)*t_d/(2*lambda*r^2)
};

/// Fraction of the plane covered at any instant: 1 - exp(-lambda*pi*r^2).
double area_coverage(double density, double radius);

/// Fraction covered at least once during a window of length dt under the
/// straight-line model: 1 - exp(-lambda*(pi*r^2 + 2*r*mean_speed*dt)).
double interval_coverage_straight(double density, double radius, double mean_speed, double dt);

/// Mean sensor speed needed to reach interval coverage f0 within time t0.
/// Valid for area_coverage(density, radius) <= f0 < 1.
double required_speed(double density, double radius, double f0, double t0);

CoverageSummary coverage_summary(double density, double radius, double mean_speed, double dt);

/// First-detection law of a stationary intruder (rate 2*lambda*r*v).
DetectionLaw static_detection_law(double density, double radius, double mean_speed);

/// E[T_n], E[T_c], E[T] for a point under fixed sensor speed v_s > 0.
DurationSummary duration_summary(double density, double radius, double speed);

/// Sensing-time model; requires v_s*t_d < 2r, else the dwell can never reach
/// t_d and the intruder is undetectable (throws std::domain_error).
SensingTimeLaw sensing_time_law(double density, double radius, double speed, double sensing_time);

/// Sensor speed minimizing the expected sensing-time detection delay.
OptimalSpeed optimal_speed(double density, double radius, double sensing_time);

/// w(u) = sqrt(1 - (4c/(1+c)^2) cos^2(u/2)), the relative-speed factor for an
/// intruder/sensor speed ratio c. Periodic in u with period 2*pi; w(pi) = 1.
double relative_speed_factor(double u, double c);

struct EffectiveSpeed {
  double value;
  double quadrature_error;  // 0 when evaluated purely from atoms
};

/// Mean sensor speed in the intruder frame:
///   v_s * (1+c) * int_0^{2pi} w(theta - theta_t) f_Theta(theta) dtheta.
/// Point-mass components are evaluated analytically; the smooth part uses
/// composite Simpson quadrature with a Richardson error estimate and throws
/// std::runtime_error if the estimate cannot reach `tol`.
EffectiveSpeed effective_speed_detailed(const DirectionDistribution& law, double theta_t,
                                        double intruder_speed, double sensor_speed,
                                        double tol = 1e-9);
double effective_speed(const DirectionDistribution& law, double theta_t, double intruder_speed,
                       double sensor_speed);

/// Detection law of a mobile intruder given its effective sensor speed.
DetectionLaw mobile_detection_law(double density, double radius, double effective_speed);

}  // namespace dyncov::analytic
