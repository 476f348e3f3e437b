#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "dyncov/model.hpp"

namespace dyncov::sim {

/// Square observation region of side `side` centered at the origin, with a
/// sampling margin wide enough that every sensor able to influence the region
/// within `horizon` is present (edge-effect elimination for the infinite
/// plane model).
struct SimulationWindow {
  double side;
  double horizon;
  double margin;  // r + v_max * horizon

  static SimulationWindow make(const NetworkConfig& config, double horizon, double side = 0.0);

  double half_side() const { return 0.5 * side; }
  double expanded_half_side() const { return 0.5 * side + margin; }
  double expanded_area() const {
    const double s = side + 2.0 * margin;
    return s * s;
  }
};

/// Sensor path model: straight lines, or an independent direction re-draw
/// every `turn_interval` time units (the piecewise approximation of the
/// arbitrary-curve mobility model).
struct MobilityModel {
  std::optional<double> turn_interval;

  static MobilityModel straight() { return {}; }
  static MobilityModel redraw_every(double interval) { return {interval}; }
};

struct Interval {
  double start;
  double end;
  double length() const { return end - start; }
};

/// Covered intervals experienced by a fixed point, disjoint and sorted.
struct CoverageTimeline {
  Vec2 point;
  double horizon;
  std::vector<Interval> intervals;

  double covered_length() const;
  /// Uncovered gaps, i.e. the complement within [0, horizon].
  std::vector<Interval> gaps() const;
};

/// One Monte Carlo detection time, right-censored at the horizon.
struct DetectionSample {
  double value;
  bool censored;
};

struct FractionEstimate {
  double fraction;
  double std_error;  // binomial
  std::int64_t covered;
  std::int64_t total;
};

/// Poisson(lambda * expanded area) sensors, uniform positions over the
/// expanded window, directions and speeds drawn per sensor from the laws.
std::vector<SensorTrack> sample_configuration(const NetworkConfig& config,
                                              const SimulationWindow& window, Rng& rng,
                                              const MobilityModel& mobility = {});

/// Smallest t >= 0 at which the point enters the closed disk of radius
/// `radius` around the (offset-adjusted) sensor position, i.e. the first root
/// of |track(t) - offset*t - point| = r per segment; nullopt if the sensor
/// never reaches the point. A point already in range at t=0 reports 0, and a
/// tangency (discriminant zero) counts as a hit. Hits at or after `latest`
/// may be skipped.
std::optional<double> first_hit_time(const SensorTrack& track, Vec2 point, double radius,
                                     Vec2 relative_velocity_offset = {0.0, 0.0},
                                     double latest = std::numeric_limits<double>::infinity());

/// Covered intervals of a single sensor at `point`, clipped to [0, horizon]
/// and merged across contiguous segments.
std::vector<Interval> covered_intervals(const SensorTrack& track, Vec2 point, double radius,
                                        Vec2 relative_velocity_offset, double horizon);

/// Union of all sensors' covered intervals at `point`, clipped to [0, horizon].
CoverageTimeline coverage_timeline(Vec2 point, const std::vector<SensorTrack>& tracks,
                                   double radius, double horizon);

/// Fraction of uniform test points covered at each of `times` (one shared
/// sensor configuration and point set, so the estimates are paired).
std::vector<FractionEstimate> estimate_area_coverage_at(const NetworkConfig& config,
                                                        const SimulationWindow& window,
                                                        const std::vector<double>& times,
                                                        int n_points, Rng& rng);
FractionEstimate estimate_area_coverage(const NetworkConfig& config,
                                        const SimulationWindow& window, double time,
                                        int n_points, Rng& rng);

/// Fraction of test points covered at some instant during [0, dt).
FractionEstimate estimate_interval_coverage(const NetworkConfig& config,
                                            const SimulationWindow& window, double dt,
                                            int n_points, Rng& rng,
                                            const MobilityModel& mobility = {});

/// Detection time of one intruder episode. The configuration is redrawn until
/// the intruder starts uncovered; sensors are sampled only within the disk
/// that can reach the intruder before the horizon. With sensing_time > 0 a
/// single sensor must hold contact for t_d; detection then lands at contact
/// start + t_d.
DetectionSample sample_detection_time(const NetworkConfig& config, const IntruderSpec& intruder,
                                      double horizon, Rng& rng,
                                      const MobilityModel& mobility = {});

/// Complete covered/uncovered durations and time-in-coverage, collected from
/// the timelines of `n_points` uniform points. Durations are kept only when
/// both endpoints are observed transitions and the interval starts no later
/// than `complete_start_cutoff` (so near-horizon censoring cannot bias the
/// kept sample).
struct DurationStudy {
  std::vector<double> uncovered;
  std::vector<double> covered;
  double covered_time = 0.0;
  double observed_time = 0.0;
};
DurationStudy duration_study(const NetworkConfig& config, const SimulationWindow& window,
                             int n_points, double complete_start_cutoff, Rng& rng);

int default_worker_count();

/// Runs `body(rep_index, rng)` for n_reps independent replications, each with
/// a deterministic child seed from (base_seed, index). Results are assembled
/// by index, so the output is identical for any worker count.
template <typename T, typename Fn>
std::vector<T> run_replications(int n_reps, std::uint64_t base_seed, Fn&& body, int workers = 0) {
  std::vector<T> out(static_cast<std::size_t>(n_reps));
  if (workers <= 0) workers = default_worker_count();
  workers = std::max(1, std::min(workers, n_reps));
  auto run_one = [&](int i) {
    Rng rng = make_rng(replication_seed(base_seed, static_cast<std::uint64_t>(i)));
    out[static_cast<std::size_t>(i)] = body(i, rng);
  };
  if (workers == 1) {
    for (int i = 0; i < n_reps; ++i) run_one(i);
    return out;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n_reps && !failed.load(); i = next.fetch_add(1)) {
        try {
          run_one(i);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace dyncov::sim
