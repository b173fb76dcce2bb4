#include "docksim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace docksim {

namespace {

using nlohmann::json;

constexpr double kDegToRad = M_PI / 180.0;

void reject_unknown_keys(const json& j, const char* where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError(std::string("unknown key \"") + item.key() + "\" in " +
                        where);
    }
  }
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) {
    throw ConfigError(std::string("\"") + key + "\" must be a number");
  }
  return j[key].get<double>();
}

VehicleState parse_pose(const json& j, const char* where) {
  if (!j.is_object()) {
    throw ConfigError(std::string(where) + " must be an object");
  }
  reject_unknown_keys(j, where, {"x", "y", "phi_deg"});
  try {
    return VehicleState(number_or(j, "x", 0.0), number_or(j, "y", 0.0),
                        number_or(j, "phi_deg", 0.0) * kDegToRad);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(where) + ": " + e.what());
  }
}

NoiseModel parse_noise(const json& j) {
  reject_unknown_keys(j, "sensor.noise",
                      {"sigma0_mm", "k_range", "sigma_heading_rad"});
  NoiseModel noise;
  noise.sigma0_mm = number_or(j, "sigma0_mm", noise.sigma0_mm);
  noise.k_range = number_or(j, "k_range", noise.k_range);
  noise.sigma_heading_rad =
      number_or(j, "sigma_heading_rad", noise.sigma_heading_rad);
  return noise;
}

OcpConfig parse_controller(const json& j) {
  reject_unknown_keys(j, "controller",
                      {"horizon", "dt_s", "weights", "v_bounds", "omega_bounds",
                       "keepout_weight", "keepout", "u_target"});
  OcpConfig cfg;
  if (j.contains("horizon")) {
    if (!j["horizon"].is_number_integer()) {
      throw ConfigError("\"horizon\" must be an integer");
    }
    cfg.horizon = j["horizon"].get<int>();
  }
  cfg.dt = number_or(j, "dt_s", cfg.dt);
  if (j.contains("weights")) {
    const json& w = j["weights"];
    reject_unknown_keys(w, "controller.weights",
                        {"w_pos", "w_head", "r_v", "r_omega", "terminal_scale"});
    cfg.weights.w_pos = number_or(w, "w_pos", cfg.weights.w_pos);
    cfg.weights.w_head = number_or(w, "w_head", cfg.weights.w_head);
    cfg.weights.r_v = number_or(w, "r_v", cfg.weights.r_v);
    cfg.weights.r_omega = number_or(w, "r_omega", cfg.weights.r_omega);
    cfg.weights.terminal_scale =
        number_or(w, "terminal_scale", cfg.weights.terminal_scale);
  }
  const auto parse_bounds = [&](const char* key, double& lo, double& hi) {
    if (!j.contains(key)) return;
    const json& b = j[key];
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() ||
        !b[1].is_number()) {
      throw ConfigError(std::string("\"") + key +
                        "\" must be an array [min, max]");
    }
    lo = b[0].get<double>();
    hi = b[1].get<double>();
  };
  parse_bounds("v_bounds", cfg.v_min, cfg.v_max);
  parse_bounds("omega_bounds", cfg.omega_min, cfg.omega_max);
  cfg.keepout_weight = number_or(j, "keepout_weight", cfg.keepout_weight);
  if (j.contains("keepout")) {
    if (!j["keepout"].is_array()) {
      throw ConfigError("\"keepout\" must be an array of rectangles");
    }
    for (const json& r : j["keepout"]) {
      reject_unknown_keys(r, "keepout[]", {"x_min", "x_max", "y_min", "y_max"});
      KeepoutRegion region;
      region.x_min = number_or(r, "x_min", 0.0);
      region.x_max = number_or(r, "x_max", 0.0);
      region.y_min = number_or(r, "y_min", 0.0);
      region.y_max = number_or(r, "y_max", 0.0);
      cfg.keepout.push_back(region);
    }
  }
  if (j.contains("u_target")) {
    const json& u = j["u_target"];
    reject_unknown_keys(u, "controller.u_target", {"v", "omega"});
    cfg.u_target.v = number_or(u, "v", 0.0);
    cfg.u_target.omega = number_or(u, "omega", 0.0);
  }
  return cfg;
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) {
    throw ConfigError("scenario must be a JSON object");
  }
  reject_unknown_keys(j, "scenario",
                      {"name", "initial_pose", "dock_pose", "t_max_s",
                       "pos_tol_m", "head_tol_deg", "seed", "sensor",
                       "controller"});
  if (!j.contains("initial_pose")) {
    throw ConfigError("scenario requires \"initial_pose\"");
  }

  Scenario s;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ConfigError("\"name\" must be a string");
    s.name = j["name"].get<std::string>();
  }
  s.initial_pose = parse_pose(j["initial_pose"], "initial_pose");
  s.dock_pose = j.contains("dock_pose")
                    ? parse_pose(j["dock_pose"], "dock_pose")
                    : VehicleState(0.0, 0.0, -90.0 * kDegToRad);
  s.t_max = number_or(j, "t_max_s", s.t_max);
  s.pos_tol_m = number_or(j, "pos_tol_m", s.pos_tol_m);
  if (j.contains("head_tol_deg")) {
    s.head_tol_rad = number_or(j, "head_tol_deg", 0.1) * kDegToRad;
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) {
      throw ConfigError("\"seed\" must be an integer");
    }
    s.seed = j["seed"].get<std::uint64_t>();
  }

  int marker_size_mm = 100;
  if (j.contains("sensor")) {
    const json& sensor = j["sensor"];
    reject_unknown_keys(sensor, "sensor",
                        {"mode", "marker_size_mm", "standoff_m",
                         "estimate_smoothing", "noise"});
    if (sensor.contains("mode")) {
      if (!sensor["mode"].is_string()) {
        throw ConfigError("sensor \"mode\" must be a string");
      }
      s.sensor_mode = parse_sensor_mode(sensor["mode"].get<std::string>());
    }
    if (sensor.contains("marker_size_mm")) {
      if (!sensor["marker_size_mm"].is_number_integer()) {
        throw ConfigError("\"marker_size_mm\" must be an integer");
      }
      marker_size_mm = sensor["marker_size_mm"].get<int>();
    }
    s.standoff_m = number_or(sensor, "standoff_m", s.standoff_m);
    s.estimate_smoothing =
        number_or(sensor, "estimate_smoothing", s.estimate_smoothing);
    if (sensor.contains("noise")) {
      s.noise = parse_noise(sensor["noise"]);
    }
  }
  if (j.contains("controller")) {
    s.cfg = parse_controller(j["controller"]);
  }

  try {
    s.marker = marker_for_dock(s.dock_pose, s.standoff_m, marker_size_mm);
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("JSON parse error: ") + e.what());
  }
}

}  // namespace

SensorMode parse_sensor_mode(const std::string& text) {
  if (text == "perfect") return SensorMode::kPerfect;
  if (text == "simulated") return SensorMode::kSimulated;
  throw ConfigError("mode must be \"perfect\" or \"simulated\"");
}

Scenario parse_scenario_json(const std::string& text) {
  return scenario_from_json(parse_text(text));
}

std::vector<Scenario> parse_scenario_list_json(const std::string& text) {
  const json j = parse_text(text);
  std::vector<Scenario> scenarios;
  if (j.is_array()) {
    for (const json& item : j) {
      scenarios.push_back(scenario_from_json(item));
    }
    if (scenarios.empty()) {
      throw ConfigError("scenario array must be non-empty");
    }
  } else {
    scenarios.push_back(scenario_from_json(j));
  }
  return scenarios;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

Scenario load_scenario_file(const std::filesystem::path& path) {
  return parse_scenario_json(read_file(path));
}

std::vector<Scenario> load_scenario_list_file(
    const std::filesystem::path& path) {
  return parse_scenario_list_json(read_file(path));
}

}  // namespace docksim
