#pragma once

#include <Eigen/Core>
#include <vector>

#include "docksim/kinematics.hpp"

namespace docksim {

/// Cost weights of the docking objective. The state deviation is
/// w_pos * F1 + w_head * F2^2 with F1 the squared planar distance and F2 the
/// wrapped heading deviation; the control effort is a diagonal quadratic.
///
/// terminal_scale adds optional terminal weighting: the end-of-horizon state
/// deviation enters with weight (terminal_scale - 1), so the neutral value
/// 1.0 leaves the plain stage sum. The defaults were fixed by closed-loop
/// tuning: light control regularization with a strong terminal pull is what
/// lets a differential-drive vehicle null the lateral error before the
/// heading locks in; heavier control weights leave a centimeter-scale
/// standoff the vehicle can no longer afford to correct.
struct Weights {
  double w_pos = 1.0;
  double w_head = 0.05;
  double r_v = 0.005;
  double r_omega = 0.005;
  double terminal_scale = 150.0;

  void validate() const;
};

/// F1: squared Euclidean distance between two planar points.
double distance_cost(const Eigen::Vector2d& p_veh, const Eigen::Vector2d& p_doc);

/// F2: heading deviation pi - ||phi_veh - phi_doc| - pi|, with the raw
/// difference wrapped first so the result is 2pi-periodic. Lies in [0, pi].
double heading_cost(double phi_veh, double phi_doc);

/// Single-stage cost: state deviation plus control effort.
double stage_cost(const VehicleState& state, const ControlInput& u,
                  const VehicleState& target, const ControlInput& u_target,
                  const Weights& w);

/// Horizon cost: sum of stage costs along the rollout of `controls` from x0,
/// stage k evaluated at the pre-step state, plus the optional terminal term
/// (terminal_scale - 1) * state-deviation at the end-of-horizon state.
double total_cost(const VehicleState& x0,
                  const std::vector<ControlInput>& controls,
                  const VehicleState& target, const ControlInput& u_target,
                  const Weights& w, double dt);

}  // namespace docksim
