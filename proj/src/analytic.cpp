#include "dyncov/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dyncov::analytic {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_domain(bool cond, const std::string& msg) {
  if (!cond) throw std::domain_error(msg);
}

}  // namespace

double area_coverage(double density, double radius) {
  require(density >= 0.0 && radius >= 0.0, "area_coverage: inputs must be >= 0");
  return -std::expm1(-density * kPi * radius * radius);
}

double interval_coverage_straight(double density, double radius, double mean_speed, double dt) {
  require(density >= 0.0 && radius >= 0.0 && mean_speed >= 0.0 && dt >= 0.0,
          "interval_coverage_straight: inputs must be >= 0");
  const double swept = kPi * radius * radius + 2.0 * radius * mean_speed * dt;
  return -std::expm1(-density * swept);
}

double required_speed(double density, double radius, double f0, double t0) {
  require(density > 0.0 && radius > 0.0 && t0 > 0.0,
          "required_speed: density, radius, t0 must be > 0");
  require_domain(f0 < 1.0, "required_speed: f0 must be < 1");
  const double exponent = density * kPi * radius * radius;
  // log1p keeps the numerator accurate when f0 sits near the validity floor;
  // the slack absorbs the last-bit rounding of an exactly-at-threshold f0.
  const double numer = exponent + std::log1p(-f0);
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + exponent);
  require_domain(numer <= slack,
                 "required_speed: f0 below the initial coverage 1-exp(-lambda*pi*r^2)");
  return std::max(0.0, -numer) / (2.0 * density * radius * t0);
}

CoverageSummary coverage_summary(double density, double radius, double mean_speed, double dt) {
  const double fa = area_coverage(density, radius);
  return CoverageSummary{fa, interval_coverage_straight(density, radius, mean_speed, dt), fa};
}

DetectionLaw static_detection_law(double density, double radius, double mean_speed) {
  require(density >= 0.0 && radius >= 0.0 && mean_speed >= 0.0,
          "static_detection_law: inputs must be >= 0");
  return DetectionLaw{2.0 * density * radius * mean_speed};
}

DurationSummary duration_summary(double density, double radius, double speed) {
  require(density > 0.0 && radius > 0.0, "duration_summary: density and radius must be > 0");
  require_domain(speed > 0.0, "duration_summary: durations are undefined at zero speed");
  const double rate = 2.0 * density * radius * speed;
  const double mean_uncovered = 1.0 / rate;
  const double mean_covered = std::expm1(density * kPi * radius * radius) / rate;
  return DurationSummary{mean_uncovered, mean_covered, mean_uncovered + mean_covered};
}

SensingTimeLaw sensing_time_law(double density, double radius, double speed,
                                double sensing_time) {
  require(density > 0.0 && radius > 0.0 && speed > 0.0,
          "sensing_time_law: density, radius, speed must be > 0");
  require(sensing_time >= 0.0, "sensing_time_law: t_d must be >= 0");
  if (speed * sensing_time >= 2.0 * radius) {
    std::ostringstream os;
    os << "sensing_time_law: never detected, t_d=" << sensing_time << " >= 2r/v_s="
       << 2.0 * radius / speed;
    throw std::domain_error(os.str());
  }
  const double half_chord = 0.5 * speed * sensing_time;
  const double r_eff = std::sqrt(radius * radius - half_chord * half_chord);
  const double rate = 2.0 * density * r_eff * speed;
  return SensingTimeLaw{r_eff, rate, sensing_time + 1.0 / rate, sensing_time};
}

OptimalSpeed optimal_speed(double density, double radius, double sensing_time) {
  require(density > 0.0 && radius > 0.0, "optimal_speed: density and radius must be > 0");
  require_domain(sensing_time > 0.0, "optimal_speed: no interior optimum at t_d = 0");
  const double two_lr2 = 2.0 * density * radius * radius;
  return OptimalSpeed{std::numbers::sqrt2 * radius / sensing_time,
                      (1.0 + two_lr2) * sensing_time / two_lr2};
}

double relative_speed_factor(double u, double c) {
  require(c >= 0.0 && std::isfinite(c), "relative_speed_factor: c must be finite and >= 0");
  if (c == 0.0) return 1.0;
  const double chat = 1.0 + c;
  const double cs = std::cos(0.5 * u);
  const double arg = 1.0 - (4.0 * c / (chat * chat)) * cs * cs;
  return std::sqrt(std::max(arg, 0.0));
}

namespace {

// Composite Simpson over [0, 2*pi] in the shifted variable u = theta - theta_t.
// Placing the c=1 cusp of w at the interval boundary keeps the integrand
// one-sided smooth, so the rule retains its full order there.
double simpson_shifted(const DirectionDistribution& law, double theta_t, double c,
                       std::size_t panels) {
  const double h = kTwoPi / static_cast<double>(panels);
  double sum = relative_speed_factor(0.0, c) * law.density(theta_t) +
               relative_speed_factor(kTwoPi, c) * law.density(kTwoPi + theta_t);
  for (std::size_t j = 1; j < panels; ++j) {
    const double u = static_cast<double>(j) * h;
    const double coef = (j % 2 == 1) ? 4.0 : 2.0;
    sum += coef * relative_speed_factor(u, c) * law.density(u + theta_t);
  }
  return sum * h / 3.0;
}

}  // namespace

EffectiveSpeed effective_speed_detailed(const DirectionDistribution& law, double theta_t,
                                        double intruder_speed, double sensor_speed, double tol) {
  require(sensor_speed > 0.0, "effective_speed: sensor speed must be > 0");
  require(intruder_speed >= 0.0, "effective_speed: intruder speed must be >= 0");
  const double c = intruder_speed / sensor_speed;
  const double chat = 1.0 + c;

  double integral = 0.0;
  for (const DirectionDistribution::Atom& a : law.atoms())
    integral += a.weight * relative_speed_factor(a.angle - theta_t, c);

  double err = 0.0;
  if (law.has_smooth()) {
    std::size_t panels = 4096;
    double coarse = simpson_shifted(law, theta_t, c, panels / 2);
    double fine = simpson_shifted(law, theta_t, c, panels);
    err = std::abs(fine - coarse) / 15.0;
    while (err > tol && panels < 65536) {
      panels *= 2;
      coarse = fine;
      fine = simpson_shifted(law, theta_t, c, panels);
      err = std::abs(fine - coarse) / 15.0;
    }
    if (err > tol) {
      std::ostringstream os;
      os << "effective_speed: quadrature did not converge, error estimate " << err
         << " > tolerance " << tol;
      throw std::runtime_error(os.str());
    }
    integral += fine;
  }
  return EffectiveSpeed{sensor_speed * chat * integral, err};
}

double effective_speed(const DirectionDistribution& law, double theta_t, double intruder_speed,
                       double sensor_speed) {
  return effective_speed_detailed(law, theta_t, intruder_speed, sensor_speed).value;
}

DetectionLaw mobile_detection_law(double density, double radius, double effective_speed) {
  require(density >= 0.0 && radius >= 0.0 && effective_speed >= 0.0,
          "mobile_detection_law: inputs must be >= 0");
  return DetectionLaw{2.0 * density * radius * effective_speed};
}

}  // namespace dyncov::analytic
