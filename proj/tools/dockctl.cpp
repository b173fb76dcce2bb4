// dockctl: run closed-loop docking scenarios and emit CSV/JSON artifacts.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "docksim/config.hpp"
#include "docksim/simulator.hpp"

namespace {

namespace fs = std::filesystem;
using namespace docksim;

constexpr int kExitOk = 0;
constexpr int kExitNotDocked = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolverFailure = 3;

struct CommonFlags {
  std::string mode;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir;
  std::optional<int> horizon;
  std::optional<double> dt;
  std::string config_path;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--mode", flags->mode, "Sensor mode: perfect or simulated")
      ->check(CLI::IsMember({"perfect", "simulated"}));
  cmd->add_option("--seed", flags->seed, "RNG seed for simulated sensing")
      ->each([flags](const std::string&) { flags->seed_given = true; });
  cmd->add_option("--out", flags->out_dir,
                  "Output directory (default: $DOCKCTL_OUT or ./out)");
  cmd->add_option("--horizon", flags->horizon, "Override controller horizon");
  cmd->add_option("--dt", flags->dt, "Override controller timestep [s]");
  cmd->add_option("--config", flags->config_path, "Scenario JSON file");
}

fs::path resolve_out_dir(const CommonFlags& flags) {
  if (!flags.out_dir.empty()) {
    return flags.out_dir;
  }
  if (const char* env = std::getenv("DOCKCTL_OUT"); env && *env) {
    return env;
  }
  return "out";
}

void apply_overrides(const CommonFlags& flags, Scenario& scenario) {
  if (!flags.mode.empty()) {
    scenario.sensor_mode = parse_sensor_mode(flags.mode);
  }
  if (flags.seed_given) {
    scenario.seed = flags.seed;
  }
  if (flags.horizon) {
    scenario.cfg.horizon = *flags.horizon;
  }
  if (flags.dt) {
    scenario.cfg.dt = *flags.dt;
  }
}

std::optional<Scenario> find_builtin(const std::string& name) {
  for (Scenario& s : standard_scenarios(SensorMode::kPerfect, 0)) {
    if (s.name == name) {
      return std::move(s);
    }
  }
  return std::nullopt;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << contents;
}

void write_artifacts(const fs::path& out_dir, const Scenario& scenario,
                     const SimResult& result) {
  fs::create_directories(out_dir);
  std::ostringstream csv;
  write_trajectory_csv(csv, result);
  write_file(out_dir / (scenario.name + "_trajectory.csv"), csv.str());
  write_file(out_dir / (scenario.name + "_result.json"),
             result_json(scenario, result));
}

void print_suite_table(const std::vector<Scenario>& scenarios,
                       const SuiteSummary& summary) {
  std::printf("%-10s %-24s %-7s %9s %16s %18s\n", "scenario", "initial pose",
              "docked", "t_dock", "pos error [m]", "heading err [deg]");
  for (std::size_t i = 0; i < summary.scenarios.size(); ++i) {
    const ScenarioSummary& entry = summary.scenarios[i];
    const VehicleState& start = scenarios[i].initial_pose;
    char pose[64];
    std::snprintf(pose, sizeof(pose), "(%.2f, %.2f, %.0f deg)", start.x,
                  start.y, start.phi * 180.0 / M_PI);
    char t_dock[32];
    if (entry.t_dock) {
      std::snprintf(t_dock, sizeof(t_dock), "%.1f", *entry.t_dock);
    } else {
      std::snprintf(t_dock, sizeof(t_dock), "-");
    }
    std::printf("%-10s %-24s %-7s %9s %16.6g %18.6g\n", entry.name.c_str(),
                pose, entry.docked ? "yes" : "no", t_dock,
                entry.position_error_m, entry.heading_error_deg);
  }
  std::printf("%-10s %-24s %-7s %9s %16.6g %18.6g\n", "average", "", "", "",
              summary.avg_position_error_m, summary.avg_heading_error_deg);
}

int cmd_run(const CommonFlags& flags, const std::string& scenario_arg) {
  Scenario scenario;
  if (!flags.config_path.empty()) {
    scenario = load_scenario_file(flags.config_path);
  } else if (!scenario_arg.empty()) {
    if (std::optional<Scenario> builtin = find_builtin(scenario_arg)) {
      scenario = std::move(*builtin);
    } else {
      scenario = load_scenario_file(scenario_arg);
    }
  } else {
    std::cerr << "run: give a builtin scenario name (s1..s4), a config path, "
                 "or --config\n";
    return kExitUsage;
  }
  apply_overrides(flags, scenario);
  scenario.validate();

  const SimResult result = run_scenario(scenario);
  write_artifacts(resolve_out_dir(flags), scenario, result);

  const auto [pos_err, head_err] = docking_metrics(result, scenario.dock_pose);
  std::printf("%s: %s  position error %.6g m, heading error %.6g deg\n",
              scenario.name.c_str(), result.docked ? "docked" : "not docked",
              pos_err, head_err);
  if (!result.diagnostic.empty()) {
    std::fprintf(stderr, "solver failure: %s\n", result.diagnostic.c_str());
    return kExitSolverFailure;
  }
  return result.docked ? kExitOk : kExitNotDocked;
}

int cmd_suite(const CommonFlags& flags) {
  std::vector<Scenario> scenarios;
  if (!flags.config_path.empty()) {
    scenarios = load_scenario_list_file(flags.config_path);
  } else {
    const SensorMode mode =
        flags.mode.empty() ? SensorMode::kPerfect : parse_sensor_mode(flags.mode);
    scenarios = standard_scenarios(mode, flags.seed);
  }
  for (Scenario& scenario : scenarios) {
    apply_overrides(flags, scenario);
    scenario.validate();
  }

  std::vector<SimResult> results;
  const SuiteSummary summary = run_suite(scenarios, 1, &results);

  const fs::path out_dir = resolve_out_dir(flags);
  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    std::ostringstream csv;
    write_trajectory_csv(csv, results[i]);
    write_file(out_dir / (scenarios[i].name + "_trajectory.csv"), csv.str());
  }
  write_file(out_dir / "suite_summary.json", suite_summary_json(summary));

  print_suite_table(scenarios, summary);

  for (const SimResult& result : results) {
    if (!result.diagnostic.empty()) {
      std::fprintf(stderr, "solver failure: %s\n", result.diagnostic.c_str());
      return kExitSolverFailure;
    }
  }
  return summary.all_docked ? kExitOk : kExitNotDocked;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop NMPC docking simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string scenario_arg;
  CLI::App* run_cmd =
      app.add_subcommand("run", "Run one scenario and write its artifacts");
  run_cmd->add_option("scenario", scenario_arg,
                      "Builtin scenario name (s1..s4) or config file path");
  add_common_flags(run_cmd, &run_flags);

  CommonFlags suite_flags;
  CLI::App* suite_cmd = app.add_subcommand(
      "suite", "Run the standard four-scenario suite and write a summary");
  add_common_flags(suite_cmd, &suite_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints usage, exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      return cmd_run(run_flags, scenario_arg);
    }
    return cmd_suite(suite_flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SolverDivergedError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
