#include "docksim/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace docksim {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

VehicleState::VehicleState(double x_in, double y_in, double phi_in) {
  require_finite(x_in, "VehicleState.x");
  require_finite(y_in, "VehicleState.y");
  require_finite(phi_in, "VehicleState.phi");
  x = x_in;
  y = y_in;
  phi = wrap_angle(phi_in);
}

ControlInput::ControlInput(double v_in, double omega_in) {
  require_finite(v_in, "ControlInput.v");
  require_finite(omega_in, "ControlInput.omega");
  v = v_in;
  omega = omega_in;
}

double wrap_angle(double theta) {
  require_finite(theta, "wrap_angle argument");
  // remainder() lands in [-pi, pi]; fold the open end onto +pi.
  double wrapped = std::remainder(theta, kTwoPi);
  if (wrapped <= -M_PI) {
    wrapped += kTwoPi;
  }
  return wrapped;
}

StateRate derivative(const VehicleState& state, const ControlInput& u) {
  return {u.v * std::cos(state.phi), u.v * std::sin(state.phi), u.omega};
}

VehicleState step(const VehicleState& state, const ControlInput& u, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("step: dt must be positive and finite");
  }
  VehicleState next;
  next.x = state.x + dt * u.v * std::cos(state.phi);
  next.y = state.y + dt * u.v * std::sin(state.phi);
  next.phi = wrap_angle(state.phi + dt * u.omega);
  return next;
}

std::vector<VehicleState> rollout(const VehicleState& state0,
                                  const std::vector<ControlInput>& controls,
                                  double dt) {
  if (controls.empty()) {
    throw std::invalid_argument("rollout: control sequence must be non-empty");
  }
  std::vector<VehicleState> trajectory;
  trajectory.reserve(controls.size() + 1);
  trajectory.push_back(state0);
  for (const ControlInput& u : controls) {
    trajectory.push_back(step(trajectory.back(), u, dt));
  }
  return trajectory;
}

}  // namespace docksim
