#pragma once

#include <vector>

namespace docksim {

/// Planar pose of the vehicle: position in meters, heading in radians.
/// The heading is normalized to (-pi, pi] on construction.
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;

  VehicleState() = default;
  VehicleState(double x_in, double y_in, double phi_in);
};

/// Forward velocity [m/s] and angular velocity [rad/s] command.
struct ControlInput {
  double v = 0.0;
  double omega = 0.0;

  ControlInput() = default;
  ControlInput(double v_in, double omega_in);
};

/// Time derivative of the vehicle state under a given control.
struct StateRate {
  double dx = 0.0;
  double dy = 0.0;
  double dphi = 0.0;
};

/// Maps any finite angle to its representative in (-pi, pi]; -pi maps to +pi.
double wrap_angle(double theta);

/// Continuous-time unicycle dynamics: (v cos phi, v sin phi, omega).
StateRate derivative(const VehicleState& state, const ControlInput& u);

/// One explicit Euler step of length dt. The trigonometric terms use the
/// pre-step heading; the resulting heading is wrapped to (-pi, pi].
VehicleState step(const VehicleState& state, const ControlInput& u, double dt);

/// Forward simulation under a control sequence. Returns controls.size() + 1
/// states, the first being state0.
std::vector<VehicleState> rollout(const VehicleState& state0,
                                  const std::vector<ControlInput>& controls,
                                  double dt);

}  // namespace docksim
