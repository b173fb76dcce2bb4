#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "docksim/simulator.hpp"

namespace docksim {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message)
      : std::runtime_error(message) {}
};

SensorMode parse_sensor_mode(const std::string& text);

/// Parses one scenario from JSON text. Angles are given in degrees; every
/// field except initial_pose has a default. Unknown keys are rejected.
Scenario parse_scenario_json(const std::string& text);

/// Parses either one scenario object or an array of them.
std::vector<Scenario> parse_scenario_list_json(const std::string& text);

Scenario load_scenario_file(const std::filesystem::path& path);
std::vector<Scenario> load_scenario_list_file(const std::filesystem::path& path);

}  // namespace docksim
