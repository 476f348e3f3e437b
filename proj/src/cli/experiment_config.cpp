#include "cli/experiment_config.hpp"

#include <fstream>
#include <set>

namespace dyncov::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config field '" + path + "': " + what);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

double get_number(const json& obj, const std::string& path, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + key, "expected an integer");
  return v.get<int>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(path + key, "expected a string");
  return v.get<std::string>();
}

}  // namespace

SpeedDistribution speed_law_from_json(const json& spec, const std::string& path) {
  check_keys(spec, path, {"type", "value", "low", "high", "values", "weights"});
  const std::string type = get_string(spec, path + ".", "type", "");
  try {
    if (type == "fixed") {
      return SpeedDistribution::fixed(get_number(spec, path + ".", "value", 1.0));
    } else if (type == "uniform") {
      return SpeedDistribution::uniform(get_number(spec, path + ".", "low", 0.0),
                                        get_number(spec, path + ".", "high", 1.0));
    } else if (type == "discrete") {
      if (!spec.contains("values") || !spec.contains("weights"))
        fail(path, "discrete law needs 'values' and 'weights'");
      return SpeedDistribution::discrete(spec.at("values").get<std::vector<double>>(),
                                         spec.at("weights").get<std::vector<double>>());
    }
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path + ".type", "expected one of fixed|uniform|discrete");
}

DirectionDistribution direction_law_from_json(const json& spec, const std::string& path) {
  check_keys(spec, path, {"type", "angle", "mu", "kappa", "components"});
  const std::string type = get_string(spec, path + ".", "type", "");
  try {
    if (type == "uniform") {
      return DirectionDistribution::uniform();
    } else if (type == "point_mass") {
      return DirectionDistribution::point_mass(get_number(spec, path + ".", "angle", 0.0));
    } else if (type == "von_mises") {
      return DirectionDistribution::von_mises(get_number(spec, path + ".", "mu", 0.0),
                                              get_number(spec, path + ".", "kappa", 1.0));
    } else if (type == "mixture") {
      if (!spec.contains("components") || !spec.at("components").is_array())
        fail(path, "mixture needs a 'components' array");
      std::vector<std::pair<double, DirectionDistribution>> parts;
      int i = 0;
      for (const json& comp : spec.at("components")) {
        const std::string cpath = path + ".components[" + std::to_string(i++) + "]";
        check_keys(comp, cpath, {"weight", "law"});
        if (!comp.contains("weight") || !comp.contains("law"))
          fail(cpath, "component needs 'weight' and 'law'");
        parts.emplace_back(comp.at("weight").get<double>(),
                           direction_law_from_json(comp.at("law"), cpath + ".law"));
      }
      return DirectionDistribution::mixture(std::move(parts));
    }
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path + ".type", "expected one of uniform|point_mass|von_mises|mixture");
}

std::vector<json> default_equilibrium_family() {
  return {
      json{{"type", "uniform"}},
      json{{"type", "point_mass"}, {"angle", 0.0}},
      json{{"type", "von_mises"}, {"mu", 0.0}, {"kappa", 2.0}},
      json{{"type", "von_mises"}, {"mu", 0.0}, {"kappa", 8.0}},
      json{{"type", "mixture"},
           {"components",
            json::array({json{{"weight", 0.5}, {"law", json{{"type", "point_mass"}, {"angle", 0.0}}}},
                         json{{"weight", 0.5},
                              {"law", json{{"type", "point_mass"},
                                           {"angle", 1.5707963267948966}}}}})}},
  };
}

NetworkConfig ExperimentConfig::network() const {
  return NetworkConfig(density, radius, speed_law_from_json(speed_spec, "network.speed"),
                       direction_law_from_json(direction_spec, "network.direction"));
}

IntruderSpec ExperimentConfig::intruder_spec() const {
  if (intruder.speed > 0.0)
    return IntruderSpec::moving(intruder.speed, intruder.direction, intruder.sensing_time);
  return IntruderSpec::stationary(intruder.sensing_time);
}

std::vector<DirectionDistribution> ExperimentConfig::game_laws() const {
  const std::vector<json>& specs = game.laws.empty() ? default_equilibrium_family() : game.laws;
  std::vector<DirectionDistribution> laws;
  int i = 0;
  for (const json& spec : specs)
    laws.push_back(direction_law_from_json(spec, "game.laws[" + std::to_string(i++) + "]"));
  return laws;
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  check_keys(doc, "", {"scenario", "seed", "replications", "test_points", "horizon",
                       "window_side", "turn_interval", "network", "intruder", "times",
                       "interval", "sweep", "game", "tolerances", "output"});
  ExperimentConfig cfg;
  cfg.scenario = get_string(doc, "", "scenario", "");
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer()) fail("seed", "expected an integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  cfg.replications = get_int(doc, "", "replications", 0);
  cfg.test_points = get_int(doc, "", "test_points", 0);
  cfg.horizon = get_number(doc, "", "horizon", 0.0);
  cfg.window_side = get_number(doc, "", "window_side", 0.0);
  cfg.turn_interval = get_number(doc, "", "turn_interval", 0.0);

  if (doc.contains("network")) {
    const json& net = doc.at("network");
    check_keys(net, "network", {"density", "radius", "speed", "direction"});
    cfg.density = get_number(net, "network.", "density", cfg.density);
    cfg.radius = get_number(net, "network.", "radius", cfg.radius);
    if (net.contains("speed")) cfg.speed_spec = net.at("speed");
    if (net.contains("direction")) cfg.direction_spec = net.at("direction");
  }
  if (doc.contains("intruder")) {
    const json& intr = doc.at("intruder");
    check_keys(intr, "intruder", {"speed", "direction", "max_speed", "sensing_time"});
    cfg.intruder.speed = get_number(intr, "intruder.", "speed", cfg.intruder.speed);
    cfg.intruder.direction = get_number(intr, "intruder.", "direction", cfg.intruder.direction);
    cfg.intruder.max_speed = get_number(intr, "intruder.", "max_speed", cfg.intruder.max_speed);
    cfg.intruder.sensing_time =
        get_number(intr, "intruder.", "sensing_time", cfg.intruder.sensing_time);
  }
  if (doc.contains("times")) {
    if (!doc.at("times").is_array()) fail("times", "expected an array of numbers");
    cfg.times = doc.at("times").get<std::vector<double>>();
  }
  cfg.interval = get_number(doc, "", "interval", cfg.interval);
  if (doc.contains("sweep")) {
    const json& sw = doc.at("sweep");
    check_keys(sw, "sweep", {"lo", "hi", "count"});
    cfg.sweep.lo = get_number(sw, "sweep.", "lo", cfg.sweep.lo);
    cfg.sweep.hi = get_number(sw, "sweep.", "hi", cfg.sweep.hi);
    cfg.sweep.count = get_int(sw, "sweep.", "count", cfg.sweep.count);
  }
  if (doc.contains("game")) {
    const json& gm = doc.at("game");
    check_keys(gm, "game", {"angles", "speeds", "laws"});
    cfg.game.angles = get_int(gm, "game.", "angles", cfg.game.angles);
    cfg.game.speeds = get_int(gm, "game.", "speeds", cfg.game.speeds);
    if (gm.contains("laws")) {
      if (!gm.at("laws").is_array()) fail("game.laws", "expected an array");
      cfg.game.laws.assign(gm.at("laws").begin(), gm.at("laws").end());
    }
  }
  if (doc.contains("tolerances")) {
    const json& tol = doc.at("tolerances");
    check_keys(tol, "tolerances",
               {"fraction_abs", "rate_rel", "mean_rel", "ks_const", "se_multiple",
                "roundtrip_abs", "identity_abs", "equilibrium_margin", "pointmass_abs"});
    Tolerances& t = cfg.tolerances;
    t.fraction_abs = get_number(tol, "tolerances.", "fraction_abs", t.fraction_abs);
    t.rate_rel = get_number(tol, "tolerances.", "rate_rel", t.rate_rel);
    t.mean_rel = get_number(tol, "tolerances.", "mean_rel", t.mean_rel);
    t.ks_const = get_number(tol, "tolerances.", "ks_const", t.ks_const);
    t.se_multiple = get_number(tol, "tolerances.", "se_multiple", t.se_multiple);
    t.roundtrip_abs = get_number(tol, "tolerances.", "roundtrip_abs", t.roundtrip_abs);
    t.identity_abs = get_number(tol, "tolerances.", "identity_abs", t.identity_abs);
    t.equilibrium_margin =
        get_number(tol, "tolerances.", "equilibrium_margin", t.equilibrium_margin);
    t.pointmass_abs = get_number(tol, "tolerances.", "pointmass_abs", t.pointmass_abs);
  }
  if (doc.contains("output")) {
    const json& out = doc.at("output");
    check_keys(out, "output", {"dir", "format"});
    cfg.output.dir = get_string(out, "output.", "dir", cfg.output.dir);
    cfg.output.format = get_string(out, "output.", "format", cfg.output.format);
    if (cfg.output.format != "csv" && cfg.output.format != "json")
      fail("output.format", "expected csv or json");
  }

  // Validate the laws eagerly so a bad config fails before any run starts.
  cfg.network();
  cfg.intruder_spec();
  cfg.game_laws();
  return cfg;
}

json ExperimentConfig::to_json() const {
  json doc;
  doc["scenario"] = scenario;
  doc["seed"] = seed;
  doc["replications"] = replications;
  doc["test_points"] = test_points;
  doc["horizon"] = horizon;
  doc["window_side"] = window_side;
  doc["turn_interval"] = turn_interval;
  doc["network"] = json{{"density", density},
                        {"radius", radius},
                        {"speed", speed_spec},
                        {"direction", direction_spec}};
  doc["intruder"] = json{{"speed", intruder.speed},
                         {"direction", intruder.direction},
                         {"max_speed", intruder.max_speed},
                         {"sensing_time", intruder.sensing_time}};
  doc["times"] = times;
  doc["interval"] = interval;
  doc["sweep"] = json{{"lo", sweep.lo}, {"hi", sweep.hi}, {"count", sweep.count}};
  doc["game"] = json{{"angles", game.angles},
                     {"speeds", game.speeds},
                     {"laws", game.laws.empty() ? json(default_equilibrium_family())
                                                : json(game.laws)}};
  doc["tolerances"] = json{{"fraction_abs", tolerances.fraction_abs},
                           {"rate_rel", tolerances.rate_rel},
                           {"mean_rel", tolerances.mean_rel},
                           {"ks_const", tolerances.ks_const},
                           {"se_multiple", tolerances.se_multiple},
                           {"roundtrip_abs", tolerances.roundtrip_abs},
                           {"identity_abs", tolerances.identity_abs},
                           {"equilibrium_margin", tolerances.equilibrium_margin},
                           {"pointmass_abs", tolerances.pointmass_abs}};
  doc["output"] = json{{"dir", output.dir}, {"format", output.format}};
  return doc;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return ExperimentConfig::from_json(doc);
}

}  // namespace dyncov::cli
