#pragma once

#include <string>
#include <variant>
#include <vector>

#include "dyncov/geometry.hpp"
#include "dyncov/rng.hpp"

namespace dyncov {

// ---------------------------------------------------------------------------
// Speed law f_{V_s}
// ---------------------------------------------------------------------------

/// Distribution of the sensor speed V_s on a finite range [0, v_max].
/// Immutable after construction; sampling takes an explicit RNG.
class SpeedDistribution {
 public:
  static SpeedDistribution fixed(double v);
  static SpeedDistribution uniform(double lo, double hi);
  static SpeedDistribution discrete(std::vector<double> values, std::vector<double> weights);

  /// Exact E[V_s].
  double mean() const;
  /// Supremum of the support (finite by construction).
  double max_speed() const;
  double sample(Rng& rng) const;
  std::string label() const;

  struct Fixed {
    double value;
  };
  struct Uniform {
    double lo, hi;
  };
  struct Discrete {
    std::vector<double> values;
    std::vector<double> weights;  // sums to 1
    std::vector<double> cumulative;
  };
  const std::variant<Fixed, Uniform, Discrete>& variant() const { return law_; }

 private:
  explicit SpeedDistribution(std::variant<Fixed, Uniform, Discrete> law) : law_(std::move(law)) {}
  std::variant<Fixed, Uniform, Discrete> law_;
};

// ---------------------------------------------------------------------------
// Direction law f_Theta
// ---------------------------------------------------------------------------

/// Distribution of the movement direction Theta on [0, 2*pi).
///
/// Internally a distribution is flattened into point-mass atoms plus an
/// absolutely continuous part. `density()` evaluates the continuous part
/// only; atoms are exposed through `atoms()` so that integrals against the
/// law can treat them analytically instead of quadraturing a delta.
class DirectionDistribution {
 public:
  static DirectionDistribution uniform();
  static DirectionDistribution point_mass(double angle);
  static DirectionDistribution von_mises(double mu, double kappa);
  static DirectionDistribution mixture(
      std::vector<std::pair<double, DirectionDistribution>> components);

  struct Atom {
    double weight;
    double angle;
  };

  /// Density of the absolutely continuous part at theta (includes component
  /// weights; integrates to `smooth_weight()` over [0, 2*pi)).
  double density(double theta) const;
  double sample(Rng& rng) const;

  const std::vector<Atom>& atoms() const { return atoms_; }
  double smooth_weight() const { return smooth_weight_; }
  bool has_smooth() const { return smooth_weight_ > 0.0; }
  bool is_uniform() const;
  std::string label() const;

 private:
  struct UniformPart {
    double weight;
  };
  struct VonMisesPart {
    double weight;
    double mu;
    double kappa;
    double log_norm;  // log(2*pi*I0(kappa))
  };
  using SmoothPart = std::variant<UniformPart, VonMisesPart>;

  DirectionDistribution() = default;
  void push_scaled(const DirectionDistribution& other, double scale);

  std::vector<Atom> atoms_;
  std::vector<SmoothPart> smooth_;
  double smooth_weight_ = 0.0;
  std::string label_;
};

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

struct TrackSegment {
  double start_time;  // first segment starts at 0; strictly increasing
  Vec2 direction;     // unit vector
  double speed;       // >= 0
};

/// A sensor's initial position plus piecewise-linear motion. Time beyond the
/// last segment extrapolates along it, so position_at is defined on [0, inf).
class SensorTrack {
 public:
  SensorTrack(Vec2 origin, std::vector<TrackSegment> segments);
  static SensorTrack straight(Vec2 origin, double angle, double speed);

  Vec2 position_at(double t) const;
  Vec2 origin() const { return origin_; }
  const std::vector<TrackSegment>& segments() const { return segments_; }
  /// Position at the start of segment i.
  Vec2 segment_origin(std::size_t i) const { return seg_start_pos_[i]; }
  double max_speed() const;

 private:
  Vec2 origin_;
  std::vector<TrackSegment> segments_;
  std::vector<Vec2> seg_start_pos_;
};

Vec2 position_at(const SensorTrack& track, double t);

// ---------------------------------------------------------------------------
// Intruder and network parameters
// ---------------------------------------------------------------------------

/// Intruder motion (speed 0 = stationary) and the minimum sensing time t_d a
/// single sensor must hold contact before detection counts (0 = instant).
struct IntruderSpec {
  double speed = 0.0;
  double direction = 0.0;
  double sensing_time = 0.0;

  static IntruderSpec stationary(double sensing_time = 0.0);
  static IntruderSpec moving(double speed, double direction, double sensing_time = 0.0);

  bool is_static() const { return speed == 0.0; }
  Vec2 velocity() const { return speed * unit_from_angle(direction); }
};

/// Parameters of the Poisson Boolean model B(lambda, r) plus the mobility laws.
struct NetworkConfig {
  double density;        // lambda > 0, sensors per unit area
  double sensing_radius; // r > 0
  SpeedDistribution speed_law;
  DirectionDistribution direction_law;

  NetworkConfig(double density, double sensing_radius, SpeedDistribution speed_law,
                DirectionDistribution direction_law);
};

}  // namespace dyncov
