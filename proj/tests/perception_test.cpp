#include "docksim/perception.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

namespace docksim {
namespace {

// Marker at the origin facing +x; vehicle placed on the +x axis looking back
// at it, so the sightline is axis-aligned and the range is exact.
SensorReading observe_at_range(double range_m, const MarkerSpec& base,
                               const NoiseModel& noise, std::mt19937_64& rng) {
  MarkerSpec marker = base;
  marker.world_pose = VehicleState(0.0, 0.0, 0.0);
  const VehicleState vehicle(range_m, 0.0, M_PI);
  return observe(vehicle, marker, noise, rng);
}

TEST(MarkerSpec, CalibratedRangesPerSize) {
  const VehicleState pose(0, 0, 0);
  const MarkerSpec m50 = MarkerSpec::for_size(50, pose);
  EXPECT_DOUBLE_EQ(m50.min_range_mm, 50.0);
  EXPECT_DOUBLE_EQ(m50.max_range_mm, 1500.0);
  const MarkerSpec m100 = MarkerSpec::for_size(100, pose);
  EXPECT_DOUBLE_EQ(m100.min_range_mm, 90.0);
  EXPECT_DOUBLE_EQ(m100.max_range_mm, 2840.0);
  const MarkerSpec m150 = MarkerSpec::for_size(150, pose);
  EXPECT_DOUBLE_EQ(m150.min_range_mm, 140.0);
  EXPECT_DOUBLE_EQ(m150.max_range_mm, 3750.0);
  EXPECT_THROW(MarkerSpec::for_size(75, pose), std::invalid_argument);
}

TEST(Observe, RangeGatingBoundaries) {
  std::mt19937_64 rng(0);
  const NoiseModel none = NoiseModel::none();
  const VehicleState origin(0, 0, 0);

  struct Case {
    int size_mm;
    double min_mm;
    double max_mm;
  };
  for (const Case c : {Case{50, 50.0, 1500.0}, Case{100, 90.0, 2840.0},
                       Case{150, 140.0, 3750.0}}) {
    const MarkerSpec marker = MarkerSpec::for_size(c.size_mm, origin);
    // Inclusive at both boundaries, undetected 1 mm outside.
    EXPECT_TRUE(observe_at_range(c.min_mm * 1e-3, marker, none, rng).detected);
    EXPECT_TRUE(observe_at_range(c.max_mm * 1e-3, marker, none, rng).detected);
    EXPECT_FALSE(
        observe_at_range((c.min_mm - 1.0) * 1e-3, marker, none, rng).detected);
    EXPECT_FALSE(
        observe_at_range((c.max_mm + 1.0) * 1e-3, marker, none, rng).detected);
  }
}

TEST(Observe, PaperScaleExamples) {
  std::mt19937_64 rng(0);
  const NoiseModel none = NoiseModel::none();
  const VehicleState origin(0, 0, 0);

  const MarkerSpec m100 = MarkerSpec::for_size(100, origin);
  EXPECT_FALSE(observe_at_range(3.0, m100, none, rng).detected);
  EXPECT_TRUE(observe_at_range(1.0, m100, none, rng).detected);

  const MarkerSpec m50 = MarkerSpec::for_size(50, origin);
  EXPECT_FALSE(observe_at_range(0.04, m50, none, rng).detected);
}

TEST(Observe, UndetectedWhenSeenFromBehindOrEdgeOn) {
  std::mt19937_64 rng(0);
  const NoiseModel none = NoiseModel::none();
  MarkerSpec marker = MarkerSpec::for_size(100, VehicleState(0, 0, 0));

  // Vehicle on the marker's front side (+x): detected.
  EXPECT_TRUE(observe(VehicleState(1.0, 0.0, M_PI), marker, none, rng).detected);
  // Behind the marker: not detected.
  EXPECT_FALSE(observe(VehicleState(-1.0, 0.0, 0.0), marker, none, rng).detected);
  // Exactly edge-on: not detected.
  EXPECT_FALSE(observe(VehicleState(0.0, 1.0, -0.5 * M_PI), marker, none, rng)
                   .detected);
}

TEST(Observe, ZeroNoiseReproducesExactRelativePose) {
  std::mt19937_64 rng(0);
  const NoiseModel none = NoiseModel::none();
  const MarkerSpec marker =
      MarkerSpec::for_size(100, VehicleState(2.0, 1.0, -0.5 * M_PI));
  const VehicleState vehicle(0.5, -0.5, 0.25 * M_PI);

  const SensorReading reading = observe(vehicle, marker, none, rng);
  ASSERT_TRUE(reading.detected);
  EXPECT_FALSE(reading.noisy);
  ASSERT_TRUE(reading.relative_pose.has_value());

  const double dx = marker.world_pose.x - vehicle.x;
  const double dy = marker.world_pose.y - vehicle.y;
  const double c = std::cos(vehicle.phi);
  const double s = std::sin(vehicle.phi);
  EXPECT_NEAR(reading.relative_pose->x(), c * dx + s * dy, 1e-12);
  EXPECT_NEAR(reading.relative_pose->y(), -s * dx + c * dy, 1e-12);
  EXPECT_NEAR(reading.relative_pose->rel_heading_rad,
              wrap_angle(marker.world_pose.phi - vehicle.phi), 1e-12);
}

TEST(Observe, NoiseStatisticsMatchConfiguredSigma) {
  const NoiseModel noise{2.0, 0.005, 0.01};
  const double range_m = 1.0;
  const double expected_sigma_m =
      (noise.sigma0_mm + noise.k_range * range_m * 1000.0) * 1e-3;

  MarkerSpec marker = MarkerSpec::for_size(100, VehicleState(0, 0, 0));
  std::mt19937_64 rng(12345);
  const VehicleState vehicle(range_m, 0.0, M_PI);

  const int samples = 10000;
  double sum_x = 0.0, sum_y = 0.0, sq_x = 0.0, sq_y = 0.0;
  for (int i = 0; i < samples; ++i) {
    const SensorReading reading = observe(vehicle, marker, noise, rng);
    ASSERT_TRUE(reading.detected);
    EXPECT_TRUE(reading.noisy);
    const double x = reading.relative_pose->x();
    const double y = reading.relative_pose->y();
    sum_x += x;
    sum_y += y;
    sq_x += x * x;
    sq_y += y * y;
  }
  const double std_x =
      std::sqrt(sq_x / samples - (sum_x / samples) * (sum_x / samples));
  const double std_y =
      std::sqrt(sq_y / samples - (sum_y / samples) * (sum_y / samples));
  EXPECT_NEAR(std_x, expected_sigma_m, 0.1 * expected_sigma_m);
  EXPECT_NEAR(std_y, expected_sigma_m, 0.1 * expected_sigma_m);
}

TEST(Observe, DeterministicPerSeed) {
  const NoiseModel noise{2.0, 0.005, 0.01};
  MarkerSpec marker = MarkerSpec::for_size(100, VehicleState(0, 0, 0));
  const VehicleState vehicle(1.0, 0.2, M_PI);

  std::mt19937_64 rng_a(77);
  std::mt19937_64 rng_b(77);
  for (int i = 0; i < 100; ++i) {
    const SensorReading a = observe(vehicle, marker, noise, rng_a);
    const SensorReading b = observe(vehicle, marker, noise, rng_b);
    ASSERT_EQ(a.detected, b.detected);
    EXPECT_EQ(a.relative_pose->range_m, b.relative_pose->range_m);
    EXPECT_EQ(a.relative_pose->bearing_rad, b.relative_pose->bearing_rad);
    EXPECT_EQ(a.relative_pose->rel_heading_rad,
              b.relative_pose->rel_heading_rad);
  }
}

TEST(EstimateTarget, AlignedFrames) {
  std::mt19937_64 rng(0);
  const NoiseModel none = NoiseModel::none();
  const MarkerSpec marker =
      MarkerSpec::for_size(100, VehicleState(1.0, 0.0, M_PI));
  const VehicleState vehicle(0, 0, 0);
  const SensorReading reading = observe(vehicle, marker, none, rng);
  ASSERT_TRUE(reading.detected);

  const VehicleState dock0 = estimate_target(reading, vehicle, 0.0);
  EXPECT_NEAR(dock0.x, 1.0, 1e-12);
  EXPECT_NEAR(dock0.y, 0.0, 1e-12);
  EXPECT_NEAR(dock0.phi, 0.0, 1e-12);

  const VehicleState dock_standoff = estimate_target(reading, vehicle, 0.3);
  EXPECT_NEAR(dock_standoff.x, 0.7, 1e-12);
  EXPECT_NEAR(dock_standoff.y, 0.0, 1e-12);
  EXPECT_NEAR(dock_standoff.phi, 0.0, 1e-12);
}

TEST(EstimateTarget, RoundTripThroughObservation) {
  std::mt19937_64 rng(0);
  const NoiseModel none = NoiseModel::none();
  std::mt19937 gen(55);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);

  int checked = 0;
  for (int i = 0; i < 300 && checked < 100; ++i) {
    MarkerSpec marker = MarkerSpec::for_size(
        150, VehicleState(coord(gen), coord(gen), angle(gen)));
    const VehicleState vehicle(coord(gen), coord(gen), angle(gen));
    const SensorReading reading = observe(vehicle, marker, none, rng);
    if (!reading.detected) continue;
    ++checked;

    // Zero standoff: the estimate must reproduce the marker world position.
    const VehicleState dock = estimate_target(reading, vehicle, 0.0);
    EXPECT_NEAR(dock.x, marker.world_pose.x, 1e-9);
    EXPECT_NEAR(dock.y, marker.world_pose.y, 1e-9);
    // And face it: heading opposite the marker normal.
    EXPECT_NEAR(std::abs(wrap_angle(dock.phi - marker.world_pose.phi)), M_PI,
                1e-9);
  }
  EXPECT_GE(checked, 100);
}

TEST(EstimateTarget, ThrowsOnUndetectedReading) {
  SensorReading reading;
  EXPECT_THROW(estimate_target(reading, VehicleState(0, 0, 0), 0.3),
               NoDetectionError);
}

TEST(CameraExtrinsicOffset, ShiftsObservationConsistently) {
  std::mt19937_64 rng(0);
  const NoiseModel none = NoiseModel::none();
  const CameraExtrinsic extrinsic{0.2, 0.0, 0.0};  // camera ahead of the axle
  const MarkerSpec marker =
      MarkerSpec::for_size(100, VehicleState(1.0, 0.0, M_PI));
  const VehicleState vehicle(0, 0, 0);

  const SensorReading reading = observe(vehicle, marker, none, rng, extrinsic);
  ASSERT_TRUE(reading.detected);
  EXPECT_NEAR(reading.relative_pose->x(), 0.8, 1e-12);

  const VehicleState dock = estimate_target(reading, vehicle, 0.0, extrinsic);
  EXPECT_NEAR(dock.x, 1.0, 1e-12);
  EXPECT_NEAR(dock.y, 0.0, 1e-12);
}

TEST(PoseErrorOp, ComponentwiseWithWrappedHeading) {
  const PoseError zero = pose_error({1, 2, 0.5}, {1, 2, 0.5});
  EXPECT_DOUBLE_EQ(zero.dx, 0.0);
  EXPECT_DOUBLE_EQ(zero.dy, 0.0);
  EXPECT_DOUBLE_EQ(zero.dphi, 0.0);

  const PoseError wrapped =
      pose_error(VehicleState(1, 2, M_PI), VehicleState(1, 2, -M_PI));
  EXPECT_DOUBLE_EQ(wrapped.dphi, 0.0);

  const PoseError e =
      pose_error(VehicleState(0, 0, 0.1), VehicleState(1, 0, -0.1));
  EXPECT_DOUBLE_EQ(e.dx, -1.0);
  EXPECT_DOUBLE_EQ(e.dy, 0.0);
  EXPECT_NEAR(e.dphi, 0.2, 1e-15);
}

}  // namespace
}  // namespace docksim
