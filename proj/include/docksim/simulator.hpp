#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "docksim/nmpc.hpp"
#include "docksim/perception.hpp"

namespace docksim {

enum class SensorMode { kPerfect, kSimulated };

/// One closed-loop docking experiment: start and dock poses, sensor setup,
/// controller configuration, termination tolerances.
struct Scenario {
  std::string name = "scenario";
  VehicleState initial_pose;
  VehicleState dock_pose;
  MarkerSpec marker;
  NoiseModel noise;
  OcpConfig cfg;
  double t_max = 60.0;
  double pos_tol_m = 0.01;
  double head_tol_rad = 0.1 * M_PI / 180.0;
  SensorMode sensor_mode = SensorMode::kPerfect;
  double standoff_m = 0.3;
  /// Blend weight of each fresh dock-pose estimate in simulated mode
  /// (1 = use raw estimates). Smoothing keeps the controller from chasing
  /// per-tick sensor noise while parked at the dock.
  double estimate_smoothing = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SimResult {
  std::vector<double> time;              // length = controls.size() + 1
  std::vector<VehicleState> trajectory;  // same length as time
  std::vector<ControlInput> controls;
  std::vector<double> step_cost;     // predicted cost per applied control
  std::vector<SolveStats> per_step;  // solve statistics per applied control
  bool docked = false;
  std::optional<double> t_dock;
  double final_position_error_m = 0.0;
  double final_heading_error_rad = 0.0;
  std::string diagnostic;  // non-empty when the solver failed mid-run
};

/// Runs one scenario to docking or timeout. Per tick: estimate the dock pose
/// (true pose in perfect mode; through the simulated sensor otherwise,
/// holding the last estimate during detection gaps), solve the receding
/// horizon problem, apply the first control to the plant. Before the first
/// detection the vehicle rotates in place to search. Docked means the pose
/// error stayed within tolerance for 5 consecutive ticks. Deterministic for
/// a fixed scenario and seed.
SimResult run_scenario(const Scenario& s);

/// Final-state accuracy: (Euclidean position error in meters, absolute
/// wrapped heading error in degrees).
std::pair<double, double> docking_metrics(const SimResult& result,
                                          const VehicleState& dock_pose);

struct ScenarioSummary {
  std::string name;
  bool docked = false;
  std::optional<double> t_dock;
  double position_error_m = 0.0;
  double heading_error_deg = 0.0;
};

struct SuiteSummary {
  std::vector<ScenarioSummary> scenarios;
  double avg_position_error_m = 0.0;
  double avg_heading_error_deg = 0.0;
  bool all_docked = false;
};

/// Runs every scenario `repetitions` times (seeds seed, seed+1, ...) and
/// aggregates per-scenario means plus suite-wide averages. Failures are
/// recorded as not-docked entries, never thrown. When first_rep_results is
/// given it receives the first-repetition result of each scenario.
SuiteSummary run_suite(const std::vector<Scenario>& scenarios,
                       int repetitions = 1,
                       std::vector<SimResult>* first_rep_results = nullptr);

/// The four standard desk-scale docking cases (s1..s4): symmetric starts
/// 2-2.5 m from a dock at the origin, approached from +y.
std::vector<Scenario> standard_scenarios(SensorMode mode, std::uint64_t seed);

/// Places a marker behind the dock pose so that a vehicle sitting at the
/// dock faces the marker front from standoff_m away.
MarkerSpec marker_for_dock(const VehicleState& dock_pose, double standoff_m,
                           int size_mm = 100);

/// Trajectory log: header t,x,y,phi,v,omega,cost,kkt,iterations then one row
/// per tick (9 significant digits), closing with the terminal state.
void write_trajectory_csv(std::ostream& os, const SimResult& result);

/// Suite summary as pretty-printed JSON: per-scenario objects plus an
/// "average" object.
std::string suite_summary_json(const SuiteSummary& summary);

/// Single-run summary JSON for one scenario result.
std::string result_json(const Scenario& scenario, const SimResult& result);

}  // namespace docksim
