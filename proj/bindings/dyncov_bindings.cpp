#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dyncov/analytic.hpp"
#include "dyncov/game.hpp"
#include "dyncov/model.hpp"
#include "dyncov/sim.hpp"
#include "dyncov/stats.hpp"

namespace py = pybind11;
using namespace dyncov;

namespace {

sim::MobilityModel mobility_from(std::optional<double> turn_interval) {
  return turn_interval ? sim::MobilityModel::redraw_every(*turn_interval)
                       : sim::MobilityModel::straight();
}

std::vector<std::pair<double, bool>> detection_times(const NetworkConfig& config,
                                                     const IntruderSpec& intruder,
                                                     double horizon, int n,
                                                     std::uint64_t seed,
                                                     std::optional<double> turn_interval,
                                                     int workers) {
  const auto mobility = mobility_from(turn_interval);
  auto samples = sim::run_replications<sim::DetectionSample>(
      n, seed,
      [&](int, Rng& rng) {
        return sim::sample_detection_time(config, intruder, horizon, rng, mobility);
      },
      workers);
  std::vector<std::pair<double, bool>> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.emplace_back(s.value, s.censored);
  return out;
}

}  // namespace

PYBIND11_MODULE(_dyncov, m) {
  m.doc() = "Dynamic coverage of mobile sensor networks: closed-form coverage and "
            "detection-time laws with a Monte Carlo verification engine.";

  // --- model ---------------------------------------------------------------
  py::class_<SpeedDistribution>(m, "SpeedDistribution")
      .def_static("fixed", &SpeedDistribution::fixed, py::arg("v"))
      .def_static("uniform", &SpeedDistribution::uniform, py::arg("lo"), py::arg("hi"))
      .def_static("discrete", &SpeedDistribution::discrete, py::arg("values"),
                  py::arg("weights"))
      .def("mean", &SpeedDistribution::mean)
      .def("max_speed", &SpeedDistribution::max_speed)
      .def("__repr__", [](const SpeedDistribution& s) { return "SpeedDistribution:" + s.label(); });

  py::class_<DirectionDistribution>(m, "DirectionDistribution")
      .def_static("uniform", &DirectionDistribution::uniform)
      .def_static("point_mass", &DirectionDistribution::point_mass, py::arg("angle"))
      .def_static("von_mises", &DirectionDistribution::von_mises, py::arg("mu"),
                  py::arg("kappa"))
      .def_static("mixture", &DirectionDistribution::mixture, py::arg("components"))
      .def("density", &DirectionDistribution::density, py::arg("theta"))
      .def("is_uniform", &DirectionDistribution::is_uniform)
      .def("__repr__",
           [](const DirectionDistribution& d) { return "DirectionDistribution:" + d.label(); });

  py::class_<IntruderSpec>(m, "IntruderSpec")
      .def_static("stationary", &IntruderSpec::stationary, py::arg("sensing_time") = 0.0)
      .def_static("moving", &IntruderSpec::moving, py::arg("speed"), py::arg("direction"),
                  py::arg("sensing_time") = 0.0)
      .def_readonly("speed", &IntruderSpec::speed)
      .def_readonly("direction", &IntruderSpec::direction)
      .def_readonly("sensing_time", &IntruderSpec::sensing_time);

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init<double, double, SpeedDistribution, DirectionDistribution>(),
           py::arg("density"), py::arg("sensing_radius"), py::arg("speed_law"),
           py::arg("direction_law"))
      .def_readonly("density", &NetworkConfig::density)
      .def_readonly("sensing_radius", &NetworkConfig::sensing_radius);

  // --- analytic ------------------------------------------------------------
  auto an = m.def_submodule("analytic", "closed-form coverage and detection laws");
  an.def("area_coverage", &analytic::area_coverage, py::arg("density"), py::arg("radius"));
  an.def("interval_coverage_straight", &analytic::interval_coverage_straight,
         py::arg("density"), py::arg("radius"), py::arg("mean_speed"), py::arg("dt"));
  an.def("required_speed", &analytic::required_speed, py::arg("density"), py::arg("radius"),
         py::arg("f0"), py::arg("t0"));
  an.def("static_detection_rate",
         [](double density, double radius, double mean_speed) {
           return analytic::static_detection_law(density, radius, mean_speed).rate;
         },
         py::arg("density"), py::arg("radius"), py::arg("mean_speed"));
  an.def("duration_summary",
         [](double density, double radius, double speed) {
           const auto d = analytic::duration_summary(density, radius, speed);
           return py::make_tuple(d.mean_uncovered, d.mean_covered, d.mean_cycle);
         },
         py::arg("density"), py::arg("radius"), py::arg("speed"),
         "returns (mean_uncovered, mean_covered, mean_cycle)");
  an.def("sensing_time_law",
         [](double density, double radius, double speed, double sensing_time) {
           const auto law = analytic::sensing_time_law(density, radius, speed, sensing_time);
           return py::make_tuple(law.effective_radius, law.rate, law.mean);
         },
         py::arg("density"), py::arg("radius"), py::arg("speed"), py::arg("sensing_time"),
         "returns (effective_radius, rate, mean_detection)");
  an.def("optimal_speed",
         [](double density, double radius, double sensing_time) {
           const auto opt = analytic::optimal_speed(density, radius, sensing_time);
           return py::make_tuple(opt.speed, opt.mean_at_optimum);
         },
         py::arg("density"), py::arg("radius"), py::arg("sensing_time"));
  an.def("relative_speed_factor", &analytic::relative_speed_factor, py::arg("u"), py::arg("c"));
  an.def("effective_speed", &analytic::effective_speed, py::arg("direction_law"),
         py::arg("theta_t"), py::arg("intruder_speed"), py::arg("sensor_speed"));
  an.def("mobile_detection_rate",
         [](double density, double radius, double effective_speed) {
           return analytic::mobile_detection_law(density, radius, effective_speed).rate;
         },
         py::arg("density"), py::arg("radius"), py::arg("effective_speed"));

  // --- sim -----------------------------------------------------------------
  auto sim_mod = m.def_submodule("sim", "event-driven Monte Carlo verification engine");
  // The estimators run with the GIL released, so they must hand back plain
  // C++ values; the tuple conversion happens after the guard is gone.
  sim_mod.def("estimate_area_coverage",
              [](const NetworkConfig& config, double time, int n_points, std::uint64_t seed,
                 double side) {
                Rng rng = make_rng(seed);
                const auto window = sim::SimulationWindow::make(config, time, side);
                const auto est = sim::estimate_area_coverage(config, window, time, n_points, rng);
                return std::pair<double, double>(est.fraction, est.std_error);
              },
              py::arg("config"), py::arg("time"), py::arg("n_points"), py::arg("seed"),
              py::arg("window_side") = 0.0, py::call_guard<py::gil_scoped_release>(),
              "returns (fraction, binomial_std_error) for one sampled configuration");
  sim_mod.def("estimate_interval_coverage",
              [](const NetworkConfig& config, double dt, int n_points, std::uint64_t seed,
                 std::optional<double> turn_interval, double side) {
                Rng rng = make_rng(seed);
                const auto window = sim::SimulationWindow::make(config, dt, side);
                const auto est = sim::estimate_interval_coverage(
                    config, window, dt, n_points, rng, mobility_from(turn_interval));
                return std::pair<double, double>(est.fraction, est.std_error);
              },
              py::arg("config"), py::arg("dt"), py::arg("n_points"), py::arg("seed"),
              py::arg("turn_interval") = py::none(), py::arg("window_side") = 0.0,
              py::call_guard<py::gil_scoped_release>());
  sim_mod.def("detection_times", &detection_times, py::arg("config"), py::arg("intruder"),
              py::arg("horizon"), py::arg("n"), py::arg("seed"),
              py::arg("turn_interval") = py::none(), py::arg("workers") = 0,
              py::call_guard<py::gil_scoped_release>(),
              "n i.i.d. detection-time draws as (value, censored) pairs");

  // --- game ----------------------------------------------------------------
  auto game_mod = m.def_submodule("game", "sensor-vs-intruder mobility game");
  py::class_<game::BestResponse>(game_mod, "BestResponse")
      .def_readonly("intruder_direction", &game::BestResponse::intruder_direction)
      .def_readonly("intruder_speed", &game::BestResponse::intruder_speed)
      .def_readonly("min_effective_speed", &game::BestResponse::min_effective_speed)
      .def_readonly("expected_time", &game::BestResponse::expected_time)
      .def("undetectable", &game::BestResponse::undetectable);
  game_mod.def("best_response_intruder",
               [](const DirectionDistribution& law, double density, double radius,
                  double sensor_speed, double intruder_speed_max, int angles, int speeds) {
                 return game::best_response_intruder(
                     law, {density, radius, sensor_speed, intruder_speed_max},
                     {angles, speeds, 1e-6});
               },
               py::arg("sensor_law"), py::arg("density"), py::arg("radius"),
               py::arg("sensor_speed"), py::arg("intruder_speed_max"),
               py::arg("angles") = 720, py::arg("speeds") = 201,
               py::call_guard<py::gil_scoped_release>());
  game_mod.def("minimax_value",
               [](const DirectionDistribution& law, double density, double radius,
                  double sensor_speed, double intruder_speed_max, int angles, int speeds) {
                 return game::minimax_value(law,
                                            {density, radius, sensor_speed, intruder_speed_max},
                                            {angles, speeds, 1e-6});
               },
               py::arg("sensor_law"), py::arg("density"), py::arg("radius"),
               py::arg("sensor_speed"), py::arg("intruder_speed_max"),
               py::arg("angles") = 720, py::arg("speeds") = 201,
               py::call_guard<py::gil_scoped_release>());

  // --- stats ---------------------------------------------------------------
  auto stats_mod = m.def_submodule("stats", "estimators for the verification tests");
  stats_mod.def("exp_rate_mle",
                [](const std::vector<double>& samples) {
                  const auto est = stats::exp_rate_mle(samples);
                  return py::make_tuple(est.rate, est.ci_low, est.ci_high);
                },
                py::arg("samples"));
  stats_mod.def("ks_exponential",
                [](const std::vector<double>& samples, double rate) {
                  return stats::ks_exponential(samples, rate);
                },
                py::arg("samples"), py::arg("rate"));
  stats_mod.def("proportion_ci",
                [](std::int64_t successes, std::int64_t trials) {
                  const auto ci = stats::proportion_ci(successes, trials);
                  return py::make_tuple(ci.p_hat, ci.ci_low, ci.ci_high);
                },
                py::arg("successes"), py::arg("trials"));

#ifdef DYNCOV_VERSION
  m.attr("__version__") = DYNCOV_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
