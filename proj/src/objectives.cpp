#include "docksim/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace docksim {

namespace {

// Stage cost with an explicit multiplier on the state-deviation part.
double stage_cost_scaled(const VehicleState& state, const ControlInput& u,
                         const VehicleState& target,
                         const ControlInput& u_target, const Weights& w,
                         double state_scale) {
  const double f1 = distance_cost({state.x, state.y}, {target.x, target.y});
  const double f2 = heading_cost(state.phi, target.phi);
  const double dv = u.v - u_target.v;
  const double domega = u.omega - u_target.omega;
  return state_scale * (w.w_pos * f1 + w.w_head * f2 * f2) + w.r_v * dv * dv +
         w.r_omega * domega * domega;
}

}  // namespace

void Weights::validate() const {
  if (w_pos < 0.0 || w_head < 0.0 || r_v < 0.0 || r_omega < 0.0 ||
      terminal_scale < 0.0) {
    throw std::invalid_argument("Weights: all weights must be nonnegative");
  }
  if (!(w_pos > 0.0) && !(w_head > 0.0)) {
    throw std::invalid_argument(
        "Weights: at least one of w_pos, w_head must be positive");
  }
}

double distance_cost(const Eigen::Vector2d& p_veh,
                     const Eigen::Vector2d& p_doc) {
  return (p_veh - p_doc).squaredNorm();
}

double heading_cost(double phi_veh, double phi_doc) {
  const double diff = std::abs(wrap_angle(phi_veh - phi_doc));
  return M_PI - std::abs(diff - M_PI);
}

double stage_cost(const VehicleState& state, const ControlInput& u,
                  const VehicleState& target, const ControlInput& u_target,
                  const Weights& w) {
  return stage_cost_scaled(state, u, target, u_target, w, 1.0);
}

double total_cost(const VehicleState& x0,
                  const std::vector<ControlInput>& controls,
                  const VehicleState& target, const ControlInput& u_target,
                  const Weights& w, double dt) {
  const std::vector<VehicleState> traj = rollout(x0, controls, dt);
  const std::size_t n = controls.size();
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    total += stage_cost_scaled(traj[k], controls[k], target, u_target, w, 1.0);
  }
  // Optional terminal weighting on the end-of-horizon state; vanishes at the
  // neutral multiplier 1.0, leaving the plain stage sum.
  if (w.terminal_scale != 1.0) {
    const VehicleState& last = traj[n];
    const double f1 = distance_cost({last.x, last.y}, {target.x, target.y});
    const double f2 = heading_cost(last.phi, target.phi);
    total += (w.terminal_scale - 1.0) * (w.w_pos * f1 + w.w_head * f2 * f2);
  }
  return total;
}

}  // namespace docksim
