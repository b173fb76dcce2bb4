#include "docksim/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace docksim {

namespace {

constexpr int kDockedTicks = 5;
constexpr double kRadToDeg = 180.0 / M_PI;

bool within_tolerance(const VehicleState& state, const Scenario& s) {
  const PoseError e = pose_error(state, s.dock_pose);
  return std::hypot(e.dx, e.dy) <= s.pos_tol_m &&
         std::abs(e.dphi) <= s.head_tol_rad;
}

}  // namespace

void Scenario::validate() const {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("Scenario: t_max must be positive");
  }
  if (!(pos_tol_m > 0.0) || !(head_tol_rad > 0.0)) {
    throw std::invalid_argument("Scenario: tolerances must be positive");
  }
  if (standoff_m < 0.0) {
    throw std::invalid_argument("Scenario: standoff must be >= 0");
  }
  if (!(estimate_smoothing > 0.0) || estimate_smoothing > 1.0) {
    throw std::invalid_argument("Scenario: estimate_smoothing must be in (0, 1]");
  }
  cfg.validate();
  marker.validate();
  noise.validate();
}

SimResult run_scenario(const Scenario& s) {
  s.validate();

  SimResult result;
  std::mt19937_64 rng(s.seed);
  MpcController controller(s.cfg);

  VehicleState state = s.initial_pose;
  result.time.push_back(0.0);
  result.trajectory.push_back(state);

  std::optional<VehicleState> dock_estimate;
  int consecutive_in_tol = 0;

  for (std::size_t tick = 0;; ++tick) {
    if (within_tolerance(state, s)) {
      ++consecutive_in_tol;
      if (consecutive_in_tol >= kDockedTicks) {
        result.docked = true;
        result.t_dock = result.time.back();
        break;
      }
    } else {
      consecutive_in_tol = 0;
    }
    const double t = static_cast<double>(tick) * s.cfg.dt;
    if (t >= s.t_max) {
      break;
    }

    // Dock-pose estimate for this tick. Fresh simulated estimates are blended
    // into the held one; detection gaps keep the last value.
    if (s.sensor_mode == SensorMode::kPerfect) {
      dock_estimate = s.dock_pose;
    } else {
      const SensorReading reading = observe(state, s.marker, s.noise, rng);
      if (reading.detected) {
        const VehicleState fresh =
            estimate_target(reading, state, s.standoff_m);
        if (dock_estimate) {
          const double a = s.estimate_smoothing;
          dock_estimate = VehicleState(
              dock_estimate->x + a * (fresh.x - dock_estimate->x),
              dock_estimate->y + a * (fresh.y - dock_estimate->y),
              wrap_angle(dock_estimate->phi +
                         a * wrap_angle(fresh.phi - dock_estimate->phi)));
        } else {
          dock_estimate = fresh;
        }
      }
    }

    ControlInput u;
    double cost = 0.0;
    SolveStats stats;
    if (dock_estimate) {
      try {
        const MpcStepResult mpc = controller.step(state, *dock_estimate);
        u = mpc.u_apply;
        cost = mpc.predicted_cost;
        stats = mpc.solve_stats;
      } catch (const SolverDivergedError& e) {
        result.diagnostic = e.what();
        break;
      }
    } else {
      // No detection yet: rotate in place to search for the marker.
      u = ControlInput(0.0, 0.5 * s.cfg.omega_max);
    }

    state = step(state, u, s.cfg.dt);
    result.controls.push_back(u);
    result.step_cost.push_back(cost);
    result.per_step.push_back(stats);
    result.time.push_back(static_cast<double>(tick + 1) * s.cfg.dt);
    result.trajectory.push_back(state);
  }

  const PoseError final_error = pose_error(result.trajectory.back(), s.dock_pose);
  result.final_position_error_m = std::hypot(final_error.dx, final_error.dy);
  result.final_heading_error_rad = std::abs(final_error.dphi);
  return result;
}

std::pair<double, double> docking_metrics(const SimResult& result,
                                          const VehicleState& dock_pose) {
  if (result.trajectory.empty()) {
    throw std::invalid_argument("docking_metrics: empty trajectory");
  }
  const PoseError e = pose_error(result.trajectory.back(), dock_pose);
  return {std::hypot(e.dx, e.dy), std::abs(e.dphi) * kRadToDeg};
}

SuiteSummary run_suite(const std::vector<Scenario>& scenarios, int repetitions,
                       std::vector<SimResult>* first_rep_results) {
  if (scenarios.empty()) {
    throw std::invalid_argument("run_suite: scenario list must be non-empty");
  }
  if (repetitions < 1) {
    throw std::invalid_argument("run_suite: repetitions must be >= 1");
  }
  if (first_rep_results) {
    first_rep_results->clear();
  }

  SuiteSummary summary;
  summary.all_docked = true;
  for (const Scenario& scenario : scenarios) {
    ScenarioSummary entry;
    entry.name = scenario.name;
    entry.docked = true;
    double t_dock_sum = 0.0;
    int docked_runs = 0;
    double pos_sum = 0.0;
    double head_sum = 0.0;
    for (int rep = 0; rep < repetitions; ++rep) {
      Scenario run = scenario;
      run.seed = scenario.seed + static_cast<std::uint64_t>(rep);
      SimResult result;
      try {
        result = run_scenario(run);
      } catch (const std::exception& e) {
        entry.docked = false;
        result.diagnostic = e.what();
        if (rep == 0 && first_rep_results) {
          first_rep_results->push_back(std::move(result));
        }
        continue;
      }
      const auto [pos_err, head_err] = docking_metrics(result, run.dock_pose);
      pos_sum += pos_err;
      head_sum += head_err;
      if (result.docked && result.t_dock) {
        t_dock_sum += *result.t_dock;
        ++docked_runs;
      } else {
        entry.docked = false;
      }
      if (rep == 0 && first_rep_results) {
        first_rep_results->push_back(std::move(result));
      }
    }
    entry.position_error_m = pos_sum / repetitions;
    entry.heading_error_deg = head_sum / repetitions;
    if (docked_runs > 0) {
      entry.t_dock = t_dock_sum / docked_runs;
    }
    summary.all_docked = summary.all_docked && entry.docked;
    summary.scenarios.push_back(std::move(entry));
  }

  for (const ScenarioSummary& entry : summary.scenarios) {
    summary.avg_position_error_m += entry.position_error_m;
    summary.avg_heading_error_deg += entry.heading_error_deg;
  }
  summary.avg_position_error_m /= static_cast<double>(summary.scenarios.size());
  summary.avg_heading_error_deg /=
      static_cast<double>(summary.scenarios.size());
  return summary;
}

MarkerSpec marker_for_dock(const VehicleState& dock_pose, double standoff_m,
                           int size_mm) {
  const double normal = wrap_angle(dock_pose.phi + M_PI);
  const VehicleState marker_pose(dock_pose.x - standoff_m * std::cos(normal),
                                 dock_pose.y - standoff_m * std::sin(normal),
                                 normal);
  return MarkerSpec::for_size(size_mm, marker_pose);
}

std::vector<Scenario> standard_scenarios(SensorMode mode, std::uint64_t seed) {
  const VehicleState dock(0.0, 0.0, -0.5 * M_PI);
  const double deg90 = 0.5 * M_PI;
  const std::vector<std::pair<std::string, VehicleState>> starts = {
      {"s1", VehicleState(-1.5, 2.0, deg90)},
      {"s2", VehicleState(1.5, 2.0, -deg90)},
      {"s3", VehicleState(1.5, 2.0, 0.0)},
      {"s4", VehicleState(-1.5, 2.0, 0.0)},
  };

  std::vector<Scenario> scenarios;
  scenarios.reserve(starts.size());
  for (const auto& [name, start] : starts) {
    Scenario s;
    s.name = name;
    s.initial_pose = start;
    s.dock_pose = dock;
    s.standoff_m = 0.3;
    s.marker = marker_for_dock(dock, s.standoff_m);
    s.sensor_mode = mode;
    s.seed = seed;
    scenarios.push_back(std::move(s));
  }
  return scenarios;
}

void write_trajectory_csv(std::ostream& os, const SimResult& result) {
  os << "t,x,y,phi,v,omega,cost,kkt,iterations\n";
  if (result.trajectory.empty()) {
    return;
  }
  char row[256];
  for (std::size_t k = 0; k < result.controls.size(); ++k) {
    std::snprintf(row, sizeof(row), "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d\n",
                  result.time[k], result.trajectory[k].x,
                  result.trajectory[k].y, result.trajectory[k].phi,
                  result.controls[k].v, result.controls[k].omega,
                  result.step_cost[k], result.per_step[k].kkt_residual,
                  result.per_step[k].iterations);
    os << row;
  }
  const VehicleState& last = result.trajectory.back();
  std::snprintf(row, sizeof(row), "%.9g,%.9g,%.9g,%.9g,0,0,0,0,0\n",
                result.time.back(), last.x, last.y, last.phi);
  os << row;
}

namespace {

nlohmann::ordered_json scenario_summary_to_json(const ScenarioSummary& entry) {
  nlohmann::ordered_json j;
  j["name"] = entry.name;
  j["docked"] = entry.docked;
  if (entry.t_dock) {
    j["t_dock"] = *entry.t_dock;
  } else {
    j["t_dock"] = nullptr;
  }
  j["position_error_m"] = entry.position_error_m;
  j["heading_error_deg"] = entry.heading_error_deg;
  return j;
}

}  // namespace

std::string suite_summary_json(const SuiteSummary& summary) {
  nlohmann::ordered_json j;
  j["scenarios"] = nlohmann::ordered_json::array();
  for (const ScenarioSummary& entry : summary.scenarios) {
    j["scenarios"].push_back(scenario_summary_to_json(entry));
  }
  j["average"]["position_error_m"] = summary.avg_position_error_m;
  j["average"]["heading_error_deg"] = summary.avg_heading_error_deg;
  j["all_docked"] = summary.all_docked;
  return j.dump(2) + "\n";
}

std::string result_json(const Scenario& scenario, const SimResult& result) {
  const auto [pos_err, head_err] = docking_metrics(result, scenario.dock_pose);
  ScenarioSummary entry;
  entry.name = scenario.name;
  entry.docked = result.docked;
  entry.t_dock = result.t_dock;
  entry.position_error_m = pos_err;
  entry.heading_error_deg = head_err;

  nlohmann::ordered_json j = scenario_summary_to_json(entry);
  j["ticks"] = result.controls.size();
  if (!result.diagnostic.empty()) {
    j["diagnostic"] = result.diagnostic;
  }
  return j.dump(2) + "\n";
}

}  // namespace docksim
