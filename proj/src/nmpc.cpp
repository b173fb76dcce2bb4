#include "docksim/nmpc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace docksim {

namespace {

std::vector<ControlInput> unpack_controls(const Eigen::VectorXd& z) {
  std::vector<ControlInput> controls(static_cast<std::size_t>(z.size() / 2));
  for (std::size_t k = 0; k < controls.size(); ++k) {
    controls[k].v = z[2 * k];
    controls[k].omega = z[2 * k + 1];
  }
  return controls;
}

Eigen::VectorXd pack_controls(const std::vector<ControlInput>& controls) {
  Eigen::VectorXd z(2 * controls.size());
  for (std::size_t k = 0; k < controls.size(); ++k) {
    z[2 * k] = controls[k].v;
    z[2 * k + 1] = controls[k].omega;
  }
  return z;
}

// Sum of squared per-region penetration depths at one point.
double keepout_penalty(const std::vector<KeepoutRegion>& regions, double px,
                       double py) {
  double total = 0.0;
  for (const KeepoutRegion& region : regions) {
    const double depth = region.penetration(px, py);
    total += depth * depth;
  }
  return total;
}

// d/d(px, py) of keepout_penalty. The depth inside a rectangle is the
// distance to the nearest edge; ties resolve in a fixed edge order.
void keepout_penalty_gradient(const std::vector<KeepoutRegion>& regions,
                              double px, double py, double& gx, double& gy) {
  gx = 0.0;
  gy = 0.0;
  for (const KeepoutRegion& region : regions) {
    const double depth = region.penetration(px, py);
    if (depth <= 0.0) continue;
    const double from_left = px - region.x_min;
    const double from_right = region.x_max - px;
    const double from_bottom = py - region.y_min;
    const double from_top = region.y_max - py;
    if (from_left <= from_right && from_left <= from_bottom &&
        from_left <= from_top) {
      gx += 2.0 * depth;
    } else if (from_right <= from_bottom && from_right <= from_top) {
      gx -= 2.0 * depth;
    } else if (from_bottom <= from_top) {
      gy += 2.0 * depth;
    } else {
      gy -= 2.0 * depth;
    }
  }
}

}  // namespace

double KeepoutRegion::penetration(double px, double py) const {
  if (px <= x_min || px >= x_max || py <= y_min || py >= y_max) {
    return 0.0;
  }
  return std::min(std::min(px - x_min, x_max - px),
                  std::min(py - y_min, y_max - py));
}

void OcpConfig::validate() const {
  if (horizon < 1) {
    throw std::invalid_argument("OcpConfig: horizon must be >= 1");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("OcpConfig: dt must be positive and finite");
  }
  weights.validate();
  if (!std::isfinite(v_min) || !std::isfinite(v_max) ||
      !std::isfinite(omega_min) || !std::isfinite(omega_max)) {
    throw std::invalid_argument("OcpConfig: control bounds must be finite");
  }
  if (v_min > v_max || omega_min > omega_max) {
    throw std::invalid_argument("OcpConfig: control bounds must be ordered");
  }
  if (keepout_weight < 0.0) {
    throw std::invalid_argument("OcpConfig: keepout_weight must be >= 0");
  }
  for (const KeepoutRegion& region : keepout) {
    if (!(region.x_min < region.x_max) || !(region.y_min < region.y_max)) {
      throw std::invalid_argument("OcpConfig: degenerate keep-out rectangle");
    }
  }
}

NlpProblem build_ocp(const VehicleState& x0, const VehicleState& target,
                     const OcpConfig& cfg) {
  cfg.validate();
  const int n = cfg.horizon;

  NlpProblem problem;
  problem.dim = 2 * n;
  problem.lower.resize(problem.dim);
  problem.upper.resize(problem.dim);
  for (int k = 0; k < n; ++k) {
    problem.lower[2 * k] = cfg.v_min;
    problem.upper[2 * k] = cfg.v_max;
    problem.lower[2 * k + 1] = cfg.omega_min;
    problem.upper[2 * k + 1] = cfg.omega_max;
  }

  problem.objective = [x0, target, cfg](const Eigen::VectorXd& z) {
    const std::vector<ControlInput> controls = unpack_controls(z);
    double value = total_cost(x0, controls, target, cfg.u_target, cfg.weights,
                              cfg.dt);
    if (!cfg.keepout.empty() && cfg.keepout_weight > 0.0) {
      const std::vector<VehicleState> traj = rollout(x0, controls, cfg.dt);
      double penalty = 0.0;
      for (const VehicleState& s : traj) {
        penalty += keepout_penalty(cfg.keepout, s.x, s.y);
      }
      value += cfg.keepout_weight * penalty;
    }
    return value;
  };

  // Adjoint (reverse) sweep through the rollout. The heading residual is the
  // wrapped difference, whose derivative is 1 almost everywhere, and the wrap
  // inside the dynamics drops out because every phi-dependent term is
  // 2pi-periodic.
  problem.gradient = [x0, target, cfg](const Eigen::VectorXd& z) {
    const int horizon = static_cast<int>(z.size()) / 2;
    const std::vector<ControlInput> controls = unpack_controls(z);
    const std::vector<VehicleState> traj = rollout(x0, controls, cfg.dt);
    const Weights& w = cfg.weights;
    const bool penalized = !cfg.keepout.empty() && cfg.keepout_weight > 0.0;

    Eigen::VectorXd grad(z.size());
    double lx = 0.0, ly = 0.0, lphi = 0.0;  // adjoint state
    {
      const VehicleState& last = traj[horizon];
      if (penalized) {
        keepout_penalty_gradient(cfg.keepout, last.x, last.y, lx, ly);
        lx *= cfg.keepout_weight;
        ly *= cfg.keepout_weight;
      }
      if (w.terminal_scale != 1.0) {
        const double boost = w.terminal_scale - 1.0;
        lx += boost * 2.0 * w.w_pos * (last.x - target.x);
        ly += boost * 2.0 * w.w_pos * (last.y - target.y);
        lphi += boost * 2.0 * w.w_head * wrap_angle(last.phi - target.phi);
      }
    }

    for (int k = horizon - 1; k >= 0; --k) {
      const VehicleState& s = traj[k];
      const ControlInput& u = controls[k];
      const double cphi = std::cos(s.phi);
      const double sphi = std::sin(s.phi);

      grad[2 * k] = 2.0 * w.r_v * (u.v - cfg.u_target.v) +
                    cfg.dt * (cphi * lx + sphi * ly);
      grad[2 * k + 1] =
          2.0 * w.r_omega * (u.omega - cfg.u_target.omega) + cfg.dt * lphi;

      double px = 0.0, py = 0.0;
      if (penalized) {
        keepout_penalty_gradient(cfg.keepout, s.x, s.y, px, py);
        px *= cfg.keepout_weight;
        py *= cfg.keepout_weight;
      }
      const double heading_residual = wrap_angle(s.phi - target.phi);
      const double new_lphi = 2.0 * w.w_head * heading_residual +
                              cfg.dt * u.v * (cphi * ly - sphi * lx) + lphi;
      lx = 2.0 * w.w_pos * (s.x - target.x) + px + lx;
      ly = 2.0 * w.w_pos * (s.y - target.y) + py + ly;
      lphi = new_lphi;
    }
    return grad;
  };

  return problem;
}

namespace {

// Heuristic approach-then-align sequence used as an extra solver seed: steer
// toward a lead point past the dock along its facing axis, which funnels the
// vehicle onto the approach corridor and arrives tangentially; inside the
// capture radius only the heading is served. The solver polishes whichever
// seed ends up in the cheapest basin.
std::vector<ControlInput> pursuit_seed(const VehicleState& x0,
                                       const VehicleState& target,
                                       const OcpConfig& cfg) {
  constexpr double kLead = 0.5;        // lead distance past the dock [m]
  constexpr double kCapture = 0.02;    // align-only radius [m]
  constexpr double kHeadingGain = 3.0;
  constexpr double kSpeedGain = 1.5;

  const double lead_x = target.x + kLead * std::cos(target.phi);
  const double lead_y = target.y + kLead * std::sin(target.phi);

  std::vector<ControlInput> seed(static_cast<std::size_t>(cfg.horizon));
  VehicleState s = x0;
  for (ControlInput& u : seed) {
    const double dist = std::hypot(target.x - s.x, target.y - s.y);
    double v = 0.0;
    double omega = 0.0;
    if (dist > kCapture) {
      const double bearing = std::atan2(lead_y - s.y, lead_x - s.x);
      const double herr = wrap_angle(bearing - s.phi);
      omega = std::clamp(kHeadingGain * herr, cfg.omega_min, cfg.omega_max);
      v = std::clamp(kSpeedGain * dist * std::cos(herr), cfg.v_min, cfg.v_max);
    } else {
      omega = std::clamp(kHeadingGain * wrap_angle(target.phi - s.phi),
                         cfg.omega_min, cfg.omega_max);
    }
    u = ControlInput(v, omega);
    s = step(s, u, cfg.dt);
  }
  return seed;
}

MpcStepResult make_step_result(const VehicleState& x0, const OcpConfig& cfg,
                               const std::vector<ControlInput>& controls,
                               const NlpSolution& solution) {
  MpcStepResult result;
  result.u_apply = controls.front();
  result.predicted_trajectory = rollout(x0, controls, cfg.dt);
  result.predicted_cost = solution.objective_value;
  result.solve_stats = {solution.iterations, solution.kkt_residual,
                        solution.converged};
  return result;
}

}  // namespace

std::pair<std::vector<ControlInput>, MpcStepResult> solve_ocp(
    const VehicleState& x0, const VehicleState& target, const OcpConfig& cfg,
    const std::optional<std::vector<ControlInput>>& warm_start) {
  const NlpProblem problem = build_ocp(x0, target, cfg);
  const int n = cfg.horizon;
  if (warm_start && static_cast<int>(warm_start->size()) != n) {
    throw std::invalid_argument("solve_ocp: warm start length must equal N");
  }

  // The shifted warm start (or all-zeros on a cold start) is always solved
  // first; the pursuit seed gives the solver a second basin that approaches
  // along the dock axis, which local descent alone tends to miss. Cold starts
  // additionally try three canonical constant maneuvers. Ties keep the
  // earlier candidate, so the warm start wins unless strictly beaten.
  std::vector<Eigen::VectorXd> starts;
  if (warm_start) {
    starts.push_back(pack_controls(*warm_start));
  } else {
    starts.push_back(Eigen::VectorXd::Zero(problem.dim));
  }
  starts.push_back(pack_controls(pursuit_seed(x0, target, cfg)));
  if (!warm_start) {
    const double v_fwd = std::clamp(0.5 * cfg.v_max, cfg.v_min, cfg.v_max);
    const double w_left =
        std::clamp(0.5 * cfg.omega_max, cfg.omega_min, cfg.omega_max);
    const double w_right =
        std::clamp(0.5 * cfg.omega_min, cfg.omega_min, cfg.omega_max);
    for (const ControlInput& seed :
         {ControlInput{v_fwd, 0.0}, ControlInput{0.0, w_left},
          ControlInput{0.0, w_right}}) {
      Eigen::VectorXd z0(problem.dim);
      for (int k = 0; k < n; ++k) {
        z0[2 * k] = seed.v;
        z0[2 * k + 1] = seed.omega;
      }
      starts.push_back(std::move(z0));
    }
  }

  NlpSolution best;
  bool first = true;
  for (const Eigen::VectorXd& z0 : starts) {
    NlpSolution candidate = solve(problem, z0);
    if (first || candidate.objective_value < best.objective_value) {
      best = std::move(candidate);
      first = false;
    }
  }

  std::vector<ControlInput> controls = unpack_controls(best.z_star);
  MpcStepResult result = make_step_result(x0, cfg, controls, best);
  return {std::move(controls), std::move(result)};
}

MpcController::MpcController(OcpConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
}

MpcStepResult MpcController::step(const VehicleState& vehicle,
                                  const VehicleState& dock) {
  std::optional<std::vector<ControlInput>> warm;
  if (!plan_.empty()) {
    std::vector<ControlInput> shifted(plan_.begin() + 1, plan_.end());
    shifted.push_back(plan_.back());
    warm = std::move(shifted);
  }
  auto [controls, result] = solve_ocp(vehicle, dock, cfg_, warm);
  plan_ = std::move(controls);
  return result;
}

}  // namespace docksim
