#include "dyncov/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dyncov::sim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMergeEps = 1e-9;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

int poisson_count(Rng& rng, double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<int> dist(mean);
  return dist(rng);
}

std::vector<TrackSegment> draw_segments(const NetworkConfig& config,
                                        const MobilityModel& mobility, double horizon,
                                        Rng& rng) {
  const double speed = config.speed_law.sample(rng);
  std::vector<TrackSegment> segments;
  segments.push_back({0.0, unit_from_angle(config.direction_law.sample(rng)), speed});
  if (mobility.turn_interval) {
    const double step = *mobility.turn_interval;
    require(step > 0.0, "turn interval must be > 0");
    for (double t = step; t < horizon; t += step)
      segments.push_back({t, unit_from_angle(config.direction_law.sample(rng)), speed});
  }
  return segments;
}

// Covered subinterval of one segment in segment-local time, or nullopt.
// x0/v are the relative position/velocity at the segment start; span is the
// segment duration. `enters_at_boundary` marks tau_hi clipped by the span.
struct SegmentCover {
  double lo, hi;
  bool starts_at_zero, ends_at_span;
};

std::optional<SegmentCover> segment_cover(Vec2 x0, Vec2 v, double span, double radius) {
  const double a = norm2(v);
  const double c = norm2(x0) - radius * radius;
  if (a <= 0.0) {
    if (c > 0.0) return std::nullopt;
    return SegmentCover{0.0, span, true, true};
  }
  const double b = 2.0 * dot(x0, v);
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) return std::nullopt;  // zero-length tangency carries no measure
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b == 0.0 ? 1.0 : b));
  double t1 = q / a;
  double t2 = (q == 0.0) ? 0.0 : c / q;
  if (t1 > t2) std::swap(t1, t2);
  if (t2 < 0.0 || t1 > span) return std::nullopt;
  SegmentCover out{std::max(t1, 0.0), std::min(t2, span), t1 <= 0.0, t2 >= span};
  if (out.hi <= out.lo) return std::nullopt;
  return out;
}

}  // namespace

SimulationWindow SimulationWindow::make(const NetworkConfig& config, double horizon,
                                        double side) {
  require(horizon >= 0.0, "horizon must be >= 0");
  if (side <= 0.0) side = 20.0 * config.sensing_radius;
  return SimulationWindow{side, horizon,
                          config.sensing_radius + config.speed_law.max_speed() * horizon};
}

double CoverageTimeline::covered_length() const {
  double total = 0.0;
  for (const Interval& iv : intervals) total += iv.length();
  return total;
}

std::vector<Interval> CoverageTimeline::gaps() const {
  std::vector<Interval> out;
  double cursor = 0.0;
  for (const Interval& iv : intervals) {
    if (iv.start > cursor) out.push_back({cursor, iv.start});
    cursor = iv.end;
  }
  if (cursor < horizon) out.push_back({cursor, horizon});
  return out;
}

std::vector<SensorTrack> sample_configuration(const NetworkConfig& config,
                                              const SimulationWindow& window, Rng& rng,
                                              const MobilityModel& mobility) {
  const int count = poisson_count(rng, config.density * window.expanded_area());
  const double half = window.expanded_half_side();
  std::vector<SensorTrack> tracks;
  tracks.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const Vec2 origin{uniform_in(rng, -half, half), uniform_in(rng, -half, half)};
    tracks.emplace_back(origin, draw_segments(config, mobility, window.horizon, rng));
  }
  return tracks;
}

std::optional<double> first_hit_time(const SensorTrack& track, Vec2 point, double radius,
                                     Vec2 relative_velocity_offset, double latest) {
  const auto& segments = track.segments();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const TrackSegment& seg = segments[i];
    const double t_start = seg.start_time;
    if (t_start >= latest) break;
    const double t_end = (i + 1 < segments.size())
                             ? segments[i + 1].start_time
                             : std::numeric_limits<double>::infinity();
    const Vec2 x0 =
        track.segment_origin(i) - t_start * relative_velocity_offset - point;
    const Vec2 v = seg.speed * seg.direction - relative_velocity_offset;
    const double c = norm2(x0) - radius * radius;
    if (c <= 0.0) return t_start;  // in range as the segment begins
    const double a = norm2(v);
    if (a <= 0.0) continue;
    const double b = 2.0 * dot(x0, v);
    if (b >= 0.0) continue;  // moving away; outside for the whole segment
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) continue;
    const double q = -0.5 * (b - std::sqrt(disc));
    const double entry = c / q;  // smaller root; tangency (disc==0) included
    if (entry <= t_end - t_start) return t_start + entry;
  }
  return std::nullopt;
}

std::vector<Interval> covered_intervals(const SensorTrack& track, Vec2 point, double radius,
                                        Vec2 relative_velocity_offset, double horizon) {
  std::vector<Interval> out;
  const auto& segments = track.segments();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const TrackSegment& seg = segments[i];
    const double t_start = seg.start_time;
    if (t_start >= horizon) break;
    const double t_next =
        (i + 1 < segments.size()) ? segments[i + 1].start_time : horizon;
    const double t_end = std::min(t_next, horizon);
    const double span = t_end - t_start;
    if (span <= 0.0) continue;
    const Vec2 x0 =
        track.segment_origin(i) - t_start * relative_velocity_offset - point;
    const Vec2 v = seg.speed * seg.direction - relative_velocity_offset;
    const auto cover = segment_cover(x0, v, span, radius);
    if (!cover) continue;
    // Pin clipped endpoints to the exact segment boundaries so coverage that
    // persists across a turn merges without float slack.
    const double lo = cover->starts_at_zero ? t_start : t_start + cover->lo;
    const double hi = cover->ends_at_span ? t_end : t_start + cover->hi;
    if (!out.empty() && lo <= out.back().end + kMergeEps) {
      out.back().end = std::max(out.back().end, hi);
    } else {
      out.push_back({lo, hi});
    }
  }
  return out;
}

CoverageTimeline coverage_timeline(Vec2 point, const std::vector<SensorTrack>& tracks,
                                   double radius, double horizon) {
  std::vector<Interval> all;
  for (const SensorTrack& track : tracks) {
    auto ivs = covered_intervals(track, point, radius, {0.0, 0.0}, horizon);
    all.insert(all.end(), ivs.begin(), ivs.end());
  }
  std::sort(all.begin(), all.end(),
            [](const Interval& a, const Interval& b) { return a.start < b.start; });
  CoverageTimeline timeline{point, horizon, {}};
  for (const Interval& iv : all) {
    if (!timeline.intervals.empty() && iv.start <= timeline.intervals.back().end) {
      timeline.intervals.back().end = std::max(timeline.intervals.back().end, iv.end);
    } else if (iv.length() > 0.0) {
      timeline.intervals.push_back(iv);
    }
  }
  return timeline;
}

std::vector<FractionEstimate> estimate_area_coverage_at(const NetworkConfig& config,
                                                        const SimulationWindow& window,
                                                        const std::vector<double>& times,
                                                        int n_points, Rng& rng) {
  require(n_points > 0, "n_points must be > 0");
  for (double t : times)
    require(t >= 0.0 && t <= window.horizon, "query time must lie in [0, horizon]");
  const auto tracks = sample_configuration(config, window, rng);
  const double half = window.half_side();
  const double r2 = config.sensing_radius * config.sensing_radius;

  std::vector<Vec2> points(static_cast<std::size_t>(n_points));
  for (Vec2& p : points) p = {uniform_in(rng, -half, half), uniform_in(rng, -half, half)};

  std::vector<FractionEstimate> out;
  out.reserve(times.size());
  std::vector<Vec2> positions(tracks.size());
  for (double t : times) {
    for (std::size_t i = 0; i < tracks.size(); ++i) positions[i] = tracks[i].position_at(t);
    std::int64_t covered = 0;
    for (const Vec2& p : points) {
      for (const Vec2& s : positions) {
        if (norm2(s - p) <= r2) {
          ++covered;
          break;
        }
      }
    }
    const double frac = static_cast<double>(covered) / n_points;
    out.push_back({frac, std::sqrt(frac * (1.0 - frac) / n_points), covered, n_points});
  }
  return out;
}

FractionEstimate estimate_area_coverage(const NetworkConfig& config,
                                        const SimulationWindow& window, double time,
                                        int n_points, Rng& rng) {
  return estimate_area_coverage_at(config, window, {time}, n_points, rng).front();
}

FractionEstimate estimate_interval_coverage(const NetworkConfig& config,
                                            const SimulationWindow& window, double dt,
                                            int n_points, Rng& rng,
                                            const MobilityModel& mobility) {
  require(n_points > 0, "n_points must be > 0");
  require(dt >= 0.0 && dt <= window.horizon, "dt must lie in [0, horizon]");
  const auto tracks = sample_configuration(config, window, rng, mobility);
  const double half = window.half_side();
  std::int64_t covered = 0;
  for (int i = 0; i < n_points; ++i) {
    const Vec2 p{uniform_in(rng, -half, half), uniform_in(rng, -half, half)};
    for (const SensorTrack& track : tracks) {
      const auto hit = first_hit_time(track, p, config.sensing_radius);
      if (hit && *hit < dt) {
        ++covered;
        break;
      }
    }
  }
  const double frac = static_cast<double>(covered) / n_points;
  return {frac, std::sqrt(frac * (1.0 - frac) / n_points), covered, n_points};
}

DetectionSample sample_detection_time(const NetworkConfig& config, const IntruderSpec& intruder,
                                      double horizon, Rng& rng, const MobilityModel& mobility) {
  require(horizon > 0.0, "horizon must be > 0");
  const double r = config.sensing_radius;
  const double r2 = r * r;
  const double reach = r + (config.speed_law.max_speed() + intruder.speed) * horizon;
  const double mean_count = config.density * kPi * reach * reach;
  const Vec2 offset = intruder.velocity();

  // Redraw until the intruder starts uncovered (Definition 3 conditioning).
  std::vector<Vec2> origins;
  for (;;) {
    origins.clear();
    const int count = poisson_count(rng, mean_count);
    bool initially_covered = false;
    for (int i = 0; i < count; ++i) {
      const double rad = reach * std::sqrt(uniform01(rng));
      const double ang = uniform_in(rng, 0.0, kTwoPi);
      const Vec2 pos = rad * unit_from_angle(ang);
      if (norm2(pos) <= r2) initially_covered = true;
      origins.push_back(pos);
    }
    if (!initially_covered) break;
  }

  // Nearest sensors first: a sensor at distance d cannot reach the intruder
  // before (d - r) / max relative speed, so once that bound passes the best
  // hit so far the remaining sensors cannot matter and their tracks are never
  // drawn. Motion draws are independent of position, so the lazy draw leaves
  // the sampled law unchanged.
  std::sort(origins.begin(), origins.end(),
            [](const Vec2& a, const Vec2& b) { return norm2(a) < norm2(b); });
  const double max_rel_speed = config.speed_law.max_speed() + intruder.speed;

  double best = std::numeric_limits<double>::infinity();
  const double t_d = intruder.sensing_time;
  for (const Vec2& origin : origins) {
    const double reach_time =
        max_rel_speed > 0.0 ? (norm(origin) - r) / max_rel_speed
                            : std::numeric_limits<double>::infinity();
    if (reach_time + t_d >= std::min(best, horizon)) break;
    SensorTrack track(origin, draw_segments(config, mobility, horizon, rng));
    if (t_d <= 0.0) {
      const auto hit = first_hit_time(track, {0.0, 0.0}, r, offset, best);
      if (hit) best = std::min(best, *hit);
    } else {
      // A single sensor must hold contact for t_d; contact intervals are
      // evaluated in the intruder frame.
      for (const Interval& iv : covered_intervals(track, {0.0, 0.0}, r, offset, horizon)) {
        if (iv.length() >= t_d) {
          best = std::min(best, iv.start + t_d);
          break;  // later intervals of this sensor start later
        }
      }
    }
  }
  if (best <= horizon) return {best, false};
  return {horizon, true};
}

DurationStudy duration_study(const NetworkConfig& config, const SimulationWindow& window,
                             int n_points, double complete_start_cutoff, Rng& rng) {
  require(n_points > 0, "n_points must be > 0");
  require(complete_start_cutoff > 0.0 && complete_start_cutoff <= window.horizon,
          "cutoff must lie in (0, horizon]");
  const auto tracks = sample_configuration(config, window, rng);
  const double half = window.half_side();
  DurationStudy study;
  for (int i = 0; i < n_points; ++i) {
    const Vec2 p{uniform_in(rng, -half, half), uniform_in(rng, -half, half)};
    const CoverageTimeline timeline = coverage_timeline(p, tracks, config.sensing_radius,
                                                        window.horizon);
    for (const Interval& iv : timeline.intervals) {
      if (iv.start > 0.0 && iv.end < window.horizon && iv.start <= complete_start_cutoff)
        study.covered.push_back(iv.length());
    }
    for (const Interval& gap : timeline.gaps()) {
      if (gap.start > 0.0 && gap.end < window.horizon && gap.start <= complete_start_cutoff)
        study.uncovered.push_back(gap.length());
    }
    study.covered_time += timeline.covered_length();
    study.observed_time += window.horizon;
  }
  return study;
}

int default_worker_count() {
  if (const char* env = std::getenv("DYNCOV_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace dyncov::sim
