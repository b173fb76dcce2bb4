#include "docksim/perception.hpp"

#include <cmath>

namespace docksim {

namespace {

struct WorldPose {
  double x;
  double y;
  double phi;
};

WorldPose camera_world_pose(const VehicleState& vehicle,
                            const CameraExtrinsic& extrinsic) {
  const double c = std::cos(vehicle.phi);
  const double s = std::sin(vehicle.phi);
  return {vehicle.x + c * extrinsic.x - s * extrinsic.y,
          vehicle.y + s * extrinsic.x + c * extrinsic.y,
          wrap_angle(vehicle.phi + extrinsic.phi)};
}

}  // namespace

MarkerSpec MarkerSpec::for_size(int size_mm, const VehicleState& world_pose) {
  MarkerSpec spec;
  spec.world_pose = world_pose;
  spec.size_mm = size_mm;
  switch (size_mm) {
    case 50:
      spec.min_range_mm = 50.0;
      spec.max_range_mm = 1500.0;
      break;
    case 100:
      spec.min_range_mm = 90.0;
      spec.max_range_mm = 2840.0;
      break;
    case 150:
      spec.min_range_mm = 140.0;
      spec.max_range_mm = 3750.0;
      break;
    default:
      throw std::invalid_argument(
          "MarkerSpec: no measured detection range for this marker size");
  }
  return spec;
}

void MarkerSpec::validate() const {
  if (!(0.0 < min_range_mm) || !(min_range_mm < max_range_mm)) {
    throw std::invalid_argument(
        "MarkerSpec: detection range must satisfy 0 < min < max");
  }
}

void NoiseModel::validate() const {
  if (sigma0_mm < 0.0 || k_range < 0.0 || sigma_heading_rad < 0.0) {
    throw std::invalid_argument("NoiseModel: all fields must be >= 0");
  }
}

SensorReading observe(const VehicleState& true_vehicle,
                      const MarkerSpec& marker, const NoiseModel& noise,
                      std::mt19937_64& rng, const CameraExtrinsic& extrinsic) {
  marker.validate();
  noise.validate();

  const WorldPose cam = camera_world_pose(true_vehicle, extrinsic);
  const double dx = marker.world_pose.x - cam.x;
  const double dy = marker.world_pose.y - cam.y;
  const double range_m = std::hypot(dx, dy);

  SensorReading reading;
  if (range_m < marker.min_range_mm * 1e-3 ||
      range_m > marker.max_range_mm * 1e-3) {
    return reading;
  }
  // Front-face check: the marker normal must point back along the sightline.
  const double facing = dx * std::cos(marker.world_pose.phi) +
                        dy * std::sin(marker.world_pose.phi);
  if (facing >= 0.0) {
    return reading;
  }

  const double c = std::cos(cam.phi);
  const double s = std::sin(cam.phi);
  double x_rel = c * dx + s * dy;
  double y_rel = -s * dx + c * dy;
  double heading_rel = wrap_angle(marker.world_pose.phi - cam.phi);

  const double sigma_m =
      (noise.sigma0_mm + noise.k_range * (range_m * 1000.0)) * 1e-3;
  const bool apply_noise = sigma_m > 0.0 || noise.sigma_heading_rad > 0.0;
  if (apply_noise) {
    std::normal_distribution<double> position_noise(0.0, 1.0);
    std::normal_distribution<double> heading_noise(0.0, 1.0);
    x_rel += sigma_m * position_noise(rng);
    y_rel += sigma_m * position_noise(rng);
    heading_rel =
        wrap_angle(heading_rel + noise.sigma_heading_rad * heading_noise(rng));
  }

  reading.detected = true;
  reading.noisy = apply_noise;
  reading.relative_pose =
      RelativePose{std::hypot(x_rel, y_rel), std::atan2(y_rel, x_rel),
                   heading_rel};
  return reading;
}

VehicleState estimate_target(const SensorReading& reading,
                             const VehicleState& vehicle_estimate,
                             double standoff_m,
                             const CameraExtrinsic& extrinsic) {
  if (!reading.detected || !reading.relative_pose) {
    throw NoDetectionError();
  }
  const RelativePose& rel = *reading.relative_pose;
  const WorldPose cam = camera_world_pose(vehicle_estimate, extrinsic);
  const double c = std::cos(cam.phi);
  const double s = std::sin(cam.phi);
  const double marker_x = cam.x + c * rel.x() - s * rel.y();
  const double marker_y = cam.y + s * rel.x() + c * rel.y();
  const double normal = wrap_angle(cam.phi + rel.rel_heading_rad);

  const double dock_x = marker_x + standoff_m * std::cos(normal);
  const double dock_y = marker_y + standoff_m * std::sin(normal);
  return VehicleState(dock_x, dock_y, wrap_angle(normal + M_PI));
}

PoseError pose_error(const VehicleState& x, const VehicleState& x_doc) {
  return {x.x - x_doc.x, x.y - x_doc.y, wrap_angle(x.phi - x_doc.phi)};
}

}  // namespace docksim
