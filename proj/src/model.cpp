#include "dyncov/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dyncov {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// SpeedDistribution
// ---------------------------------------------------------------------------

SpeedDistribution SpeedDistribution::fixed(double v) {
  require(finite_nonneg(v), "speed must be finite and >= 0");
  return SpeedDistribution(Fixed{v});
}

SpeedDistribution SpeedDistribution::uniform(double lo, double hi) {
  require(finite_nonneg(lo) && finite_nonneg(hi) && lo <= hi,
          "speed range must be finite with 0 <= lo <= hi");
  return SpeedDistribution(Uniform{lo, hi});
}

SpeedDistribution SpeedDistribution::discrete(std::vector<double> values,
                                              std::vector<double> weights) {
  require(!values.empty() && values.size() == weights.size(),
          "discrete speed law needs matching, non-empty values/weights");
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(finite_nonneg(values[i]), "speeds must be finite and >= 0");
    require(finite_nonneg(weights[i]), "weights must be finite and >= 0");
    total += weights[i];
  }
  require(std::abs(total - 1.0) <= 1e-12, "speed weights must sum to 1 within 1e-12");
  Discrete d{std::move(values), std::move(weights), {}};
  d.cumulative.resize(d.weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < d.weights.size(); ++i) {
    acc += d.weights[i];
    d.cumulative[i] = acc;
  }
  d.cumulative.back() = 1.0;
  return SpeedDistribution(std::move(d));
}

double SpeedDistribution::mean() const {
  return std::visit(
      [](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Fixed>) {
          return law.value;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return 0.5 * (law.lo + law.hi);
        } else {
          double m = 0.0;
          for (std::size_t i = 0; i < law.values.size(); ++i) m += law.values[i] * law.weights[i];
          return m;
        }
      },
      law_);
}

double SpeedDistribution::max_speed() const {
  return std::visit(
      [](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Fixed>) {
          return law.value;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return law.hi;
        } else {
          return *std::max_element(law.values.begin(), law.values.end());
        }
      },
      law_);
}

double SpeedDistribution::sample(Rng& rng) const {
  return std::visit(
      [&rng](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Fixed>) {
          return law.value;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return uniform_in(rng, law.lo, law.hi);
        } else {
          const double u = uniform01(rng);
          auto it = std::lower_bound(law.cumulative.begin(), law.cumulative.end(), u);
          std::size_t i = static_cast<std::size_t>(it - law.cumulative.begin());
          if (i >= law.values.size()) i = law.values.size() - 1;
          return law.values[i];
        }
      },
      law_);
}

std::string SpeedDistribution::label() const {
  return std::visit(
      [](const auto& law) -> std::string {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Fixed>) {
          return "fixed(" + fmt(law.value) + ")";
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return "uniform(" + fmt(law.lo) + "," + fmt(law.hi) + ")";
        } else {
          return "discrete(" + std::to_string(law.values.size()) + " pts)";
        }
      },
      law_);
}

// ---------------------------------------------------------------------------
// DirectionDistribution
// ---------------------------------------------------------------------------

DirectionDistribution DirectionDistribution::uniform() {
  DirectionDistribution d;
  d.smooth_.push_back(UniformPart{1.0});
  d.smooth_weight_ = 1.0;
  d.label_ = "uniform";
  return d;
}

DirectionDistribution DirectionDistribution::point_mass(double angle) {
  require(std::isfinite(angle), "point-mass angle must be finite");
  DirectionDistribution d;
  d.atoms_.push_back(Atom{1.0, wrap_angle(angle)});
  d.label_ = "point-mass(" + fmt(wrap_angle(angle)) + ")";
  return d;
}

DirectionDistribution DirectionDistribution::von_mises(double mu, double kappa) {
  require(std::isfinite(mu), "von Mises mu must be finite");
  require(std::isfinite(kappa) && kappa >= 0.0, "von Mises kappa must be finite and >= 0");
  if (kappa == 0.0) return uniform();
  DirectionDistribution d;
  const double log_norm = std::log(kTwoPi * std::cyl_bessel_i(0.0, kappa));
  d.smooth_.push_back(VonMisesPart{1.0, wrap_angle(mu), kappa, log_norm});
  d.smooth_weight_ = 1.0;
  d.label_ = "von-mises(" + fmt(wrap_angle(mu)) + "," + fmt(kappa) + ")";
  return d;
}

void DirectionDistribution::push_scaled(const DirectionDistribution& other, double scale) {
  for (const Atom& a : other.atoms_) atoms_.push_back(Atom{scale * a.weight, a.angle});
  for (const SmoothPart& p : other.smooth_) {
    SmoothPart q = p;
    std::visit([scale](auto& part) { part.weight *= scale; }, q);
    smooth_.push_back(std::move(q));
  }
  smooth_weight_ += scale * other.smooth_weight_;
}

DirectionDistribution DirectionDistribution::mixture(
    std::vector<std::pair<double, DirectionDistribution>> components) {
  require(!components.empty(), "mixture needs at least one component");
  double total = 0.0;
  for (const auto& [w, c] : components) {
    require(finite_nonneg(w), "mixture weights must be finite and >= 0");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12, "mixture weights must sum to 1 within 1e-12");
  DirectionDistribution d;
  std::string label = "mixture(";
  bool first = true;
  for (const auto& [w, c] : components) {
    if (w == 0.0) continue;
    d.push_scaled(c, w);
    if (!first) label += "+";
    label += fmt(w) + "*" + c.label_;
    first = false;
  }
  d.label_ = label + ")";
  return d;
}

double DirectionDistribution::density(double theta) const {
  const double th = wrap_angle(theta);
  double f = 0.0;
  for (const SmoothPart& p : smooth_) {
    f += std::visit(
        [th](const auto& part) -> double {
          using T = std::decay_t<decltype(part)>;
          if constexpr (std::is_same_v<T, UniformPart>) {
            return part.weight / kTwoPi;
          } else {
            return part.weight * std::exp(part.kappa * std::cos(th - part.mu) - part.log_norm);
          }
        },
        p);
  }
  return f;
}

namespace {

// Best & Fisher (1979) wrapped-Cauchy rejection sampler.
double sample_von_mises(Rng& rng, double mu, double kappa) {
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double s = (1.0 + rho * rho) / (2.0 * rho);
  for (;;) {
    const double z = std::cos(0.5 * kTwoPi * uniform01(rng));
    const double f = (1.0 + s * z) / (s + z);
    const double c = kappa * (s - f);
    const double u2 = uniform01(rng);
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
      return wrap_angle(mu + sign * std::acos(f));
    }
  }
}

}  // namespace

double DirectionDistribution::sample(Rng& rng) const {
  double u = uniform01(rng);
  for (const Atom& a : atoms_) {
    if (u < a.weight) return a.angle;
    u -= a.weight;
  }
  for (const SmoothPart& p : smooth_) {
    const double w = std::visit([](const auto& part) { return part.weight; }, p);
    if (u < w || &p == &smooth_.back()) {
      return std::visit(
          [&rng](const auto& part) -> double {
            using T = std::decay_t<decltype(part)>;
            if constexpr (std::is_same_v<T, UniformPart>) {
              return uniform_in(rng, 0.0, kTwoPi);
            } else {
              return sample_von_mises(rng, part.mu, part.kappa);
            }
          },
          p);
    }
    u -= w;
  }
  // Only reachable for a pure-atom law when u accumulated rounding error.
  return atoms_.back().angle;
}

bool DirectionDistribution::is_uniform() const {
  return atoms_.empty() && smooth_.size() == 1 &&
         std::holds_alternative<UniformPart>(smooth_.front());
}

std::string DirectionDistribution::label() const { return label_; }

// ---------------------------------------------------------------------------
// SensorTrack
// ---------------------------------------------------------------------------

SensorTrack::SensorTrack(Vec2 origin, std::vector<TrackSegment> segments)
    : origin_(origin), segments_(std::move(segments)) {
  require(!segments_.empty(), "track needs at least one segment");
  require(segments_.front().start_time == 0.0, "first segment must start at t=0");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const TrackSegment& s = segments_[i];
    require(finite_nonneg(s.speed), "segment speed must be finite and >= 0");
    require(std::abs(norm2(s.direction) - 1.0) <= 1e-9, "segment direction must be a unit vector");
    if (i > 0)
      require(s.start_time > segments_[i - 1].start_time,
              "segment start times must be strictly increasing");
  }
  seg_start_pos_.resize(segments_.size());
  seg_start_pos_[0] = origin_;
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    const TrackSegment& prev = segments_[i - 1];
    const double dt = segments_[i].start_time - prev.start_time;
    seg_start_pos_[i] = seg_start_pos_[i - 1] + (prev.speed * dt) * prev.direction;
  }
}

SensorTrack SensorTrack::straight(Vec2 origin, double angle, double speed) {
  return SensorTrack(origin, {TrackSegment{0.0, unit_from_angle(angle), speed}});
}

Vec2 SensorTrack::position_at(double t) const {
  require(t >= 0.0, "position_at requires t >= 0");
  // Find the last segment with start_time <= t; beyond the last segment the
  // motion extrapolates along it.
  std::size_t i = segments_.size() - 1;
  while (i > 0 && segments_[i].start_time > t) --i;
  const TrackSegment& s = segments_[i];
  return seg_start_pos_[i] + (s.speed * (t - s.start_time)) * s.direction;
}

double SensorTrack::max_speed() const {
  double m = 0.0;
  for (const TrackSegment& s : segments_) m = std::max(m, s.speed);
  return m;
}

Vec2 position_at(const SensorTrack& track, double t) { return track.position_at(t); }

// ---------------------------------------------------------------------------
// IntruderSpec / NetworkConfig
// ---------------------------------------------------------------------------

IntruderSpec IntruderSpec::stationary(double sensing_time) {
  require(finite_nonneg(sensing_time), "sensing time must be finite and >= 0");
  return IntruderSpec{0.0, 0.0, sensing_time};
}

IntruderSpec IntruderSpec::moving(double speed, double direction, double sensing_time) {
  require(finite_nonneg(speed), "intruder speed must be finite and >= 0");
  require(finite_nonneg(sensing_time), "sensing time must be finite and >= 0");
  return IntruderSpec{speed, wrap_angle(direction), sensing_time};
}

NetworkConfig::NetworkConfig(double density, double sensing_radius, SpeedDistribution speed_law,
                             DirectionDistribution direction_law)
    : density(density),
      sensing_radius(sensing_radius),
      speed_law(std::move(speed_law)),
      direction_law(std::move(direction_law)) {
  require(std::isfinite(density) && density >= 0.0, "density must be finite and >= 0");
  require(std::isfinite(sensing_radius) && sensing_radius > 0.0, "sensing radius must be > 0");
  require(std::isfinite(this->speed_law.max_speed()), "speed law support must be bounded");
}

}  // namespace dyncov
