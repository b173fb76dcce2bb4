#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

#include "docksim/kinematics.hpp"

namespace docksim {

/// Fiducial marker in the world: print size, the detection range measured
/// for that size, and the marker's pose (position plus facing-normal angle).
struct MarkerSpec {
  double size_mm = 100.0;
  double min_range_mm = 90.0;
  double max_range_mm = 2840.0;
  VehicleState world_pose;

  /// Detection ranges measured for the calibrated print sizes
  /// (50, 100, or 150 mm edge length). Throws for other sizes.
  static MarkerSpec for_size(int size_mm, const VehicleState& world_pose);

  void validate() const;
};

/// Distance-dependent observation noise: positional std in millimeters is
/// sigma0_mm + k_range * range_mm; heading noise is fixed.
struct NoiseModel {
  double sigma0_mm = 2.0;
  double k_range = 0.005;
  double sigma_heading_rad = 0.01;

  static NoiseModel none() { return {0.0, 0.0, 0.0}; }
  void validate() const;
};

/// Mounting pose of the camera in the vehicle frame; identity by default.
struct CameraExtrinsic {
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;
};

/// Marker pose in the camera frame.
struct RelativePose {
  double range_m = 0.0;
  double bearing_rad = 0.0;      // direction toward the marker
  double rel_heading_rad = 0.0;  // marker facing normal

  double x() const { return range_m * std::cos(bearing_rad); }
  double y() const { return range_m * std::sin(bearing_rad); }
};

struct SensorReading {
  bool detected = false;
  std::optional<RelativePose> relative_pose;
  bool noisy = false;  // whether noise was applied to this reading
};

class NoDetectionError : public std::runtime_error {
 public:
  NoDetectionError() : std::runtime_error("marker not detected") {}
};

/// Simulated marker observation. Detection requires the range to lie within
/// the marker's detection interval (inclusive) and the marker front face to
/// be turned toward the camera; a marker seen from behind or edge-on is not
/// detected. When detected, the relative pose is the exact pose plus
/// zero-mean Gaussian noise on the planar position components and heading.
SensorReading observe(const VehicleState& true_vehicle,
                      const MarkerSpec& marker, const NoiseModel& noise,
                      std::mt19937_64& rng,
                      const CameraExtrinsic& extrinsic = {});

/// Docking pose derived from a detection: the marker's world pose is
/// reconstructed through the vehicle estimate, then offset by standoff_m
/// along the marker normal, with the heading facing the marker. Throws
/// NoDetectionError on an undetected reading.
VehicleState estimate_target(const SensorReading& reading,
                             const VehicleState& vehicle_estimate,
                             double standoff_m,
                             const CameraExtrinsic& extrinsic = {});

struct PoseError {
  double dx = 0.0;
  double dy = 0.0;
  double dphi = 0.0;  // wrapped to (-pi, pi]
};

/// Componentwise pose error x - x_doc with the heading difference wrapped.
PoseError pose_error(const VehicleState& x, const VehicleState& x_doc);

}  // namespace docksim
