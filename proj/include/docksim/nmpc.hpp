#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "docksim/kinematics.hpp"
#include "docksim/objectives.hpp"
#include "docksim/optimizer.hpp"

namespace docksim {

/// Axis-aligned rectangle the vehicle must stay out of.
struct KeepoutRegion {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  /// Euclidean depth of (px, py) inside the rectangle; 0 on or outside the
  /// boundary.
  double penetration(double px, double py) const;
};

/// Horizon, weights, control bounds, and free-space penalty of the docking
/// optimal control problem.
struct OcpConfig {
  int horizon = 20;
  double dt = 0.1;
  Weights weights;
  ControlInput u_target;  // control the vehicle should settle at
  double v_min = -0.5;
  double v_max = 2.0;
  double omega_min = -1.0;
  double omega_max = 1.0;
  std::vector<KeepoutRegion> keepout;
  double keepout_weight = 10000.0;

  void validate() const;
};

struct SolveStats {
  int iterations = 0;
  double kkt_residual = 0.0;
  bool converged = false;
};

struct MpcStepResult {
  ControlInput u_apply;  // first element of the optimal sequence
  std::vector<VehicleState> predicted_trajectory;  // horizon + 1 states
  double predicted_cost = 0.0;
  SolveStats solve_stats;
};

/// Transcribes the docking problem by direct single shooting. The decision
/// vector is [v_0, omega_0, ..., v_{N-1}, omega_{N-1}]; states are eliminated
/// by forward rollout. Keep-out regions enter as squared-penetration
/// penalties over all horizon states, weighted by keepout_weight. The
/// returned problem carries an analytic adjoint gradient.
NlpProblem build_ocp(const VehicleState& x0, const VehicleState& target,
                     const OcpConfig& cfg);

/// Solves the transcribed problem from a deterministic set of starts: the
/// warm start (all-zeros when absent) plus a pursuit-style seed, and on cold
/// starts three canonical constant maneuvers. The best local optimum is
/// returned; ties keep the warm start.
std::pair<std::vector<ControlInput>, MpcStepResult> solve_ocp(
    const VehicleState& x0, const VehicleState& target, const OcpConfig& cfg,
    const std::optional<std::vector<ControlInput>>& warm_start = std::nullopt);

/// Receding-horizon controller: solves the OCP at each call, applies the
/// first control, and warm-starts the next call from the previous optimal
/// sequence shifted left one step with the last element repeated.
class MpcController {
 public:
  explicit MpcController(OcpConfig cfg);

  MpcStepResult step(const VehicleState& vehicle, const VehicleState& dock);

  /// Optimal sequence of the most recent step; empty before the first call.
  const std::vector<ControlInput>& last_plan() const { return plan_; }
  const OcpConfig& config() const { return cfg_; }
  void reset() { plan_.clear(); }

 private:
  OcpConfig cfg_;
  std::vector<ControlInput> plan_;
};

}  // namespace docksim
