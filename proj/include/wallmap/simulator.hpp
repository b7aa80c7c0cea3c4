#pragma once

#include "wallmap/core_types.hpp"
#include "wallmap/sensor_model.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace wallmap::sim {

struct WallSegment {
  Eigen::Vector2d a;
  Eigen::Vector2d b;
};

/// A set of wall segments with exact ground truth. Segments must have
/// positive length and supporting lines that miss the world origin (so every
/// ground-truth closest-point parameter is well defined).
class Environment {
 public:
  Environment() = default;
  explicit Environment(std::vector<WallSegment> walls);

  const std::vector<WallSegment>& walls() const { return walls_; }
  bool empty() const { return walls_.empty(); }

  /// World-frame closest-point parameter of each segment's supporting line,
  /// in segment order.
  std::vector<WallParam> ground_truth_walls() const;

 private:
  std::vector<WallSegment> walls_;
};

struct SensorSpec {
  double fov = 1.0;        // radians, horizontal
  int samples = 640;       // per row
  double max_range = 5.0;  // meters
  double sigma = 0.0;      // range noise at 1 m; effective sigma scales with range^2
  double dropout = 0.0;    // probability of replacing a sample with the sentinel
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// Noiseless scan row: `samples` bearings evenly spanning the fov, nearest
/// segment intersection within max_range, sensor-frame planar points,
/// sentinel where nothing is hit.
ScanRow raycast_row(const Environment& env, const Pose2D& pose, const SensorSpec& spec);

/// Adds zero-mean Gaussian range noise with sigma_eff = sigma * range^2 (in
/// meters, range in meters) along each ray, then drops samples with
/// probability spec.dropout. Deterministic given the generator state.
ScanRow corrupt(const ScanRow& row, const SensorSpec& spec, std::mt19937_64& rng);
ScanRow corrupt(const ScanRow& row, const SensorSpec& spec);

/// Piecewise-linear trajectory through the waypoints, advancing `step`
/// meters per frame, heading turning at most `turn_step` per frame toward
/// each segment bearing. The first pose sits on waypoints.front() with its
/// stated heading.
std::vector<Pose2D> generate_trajectory(const std::vector<Pose2D>& waypoints, double step,
                                        double turn_step);

/// Sensor-frame closest-point parameter of every wall segment visible at
/// this pose (a segment is visible when at least one sample ray hits it
/// nearest, within max_range). Computed from the transformed supporting
/// line geometry, independent of the sensor_model formulas. With
/// `model == paper` the world parameter is instead transformed as a point,
/// matching what the point-style model should observe.
std::vector<WallParam> ground_truth_observation(const Environment& env, const Pose2D& pose,
                                                const SensorSpec& spec, SensorModelKind model);

/// A named synthetic setup: environment, trajectory waypoints and defaults.
struct Scenario {
  std::string name;
  Environment env;
  std::vector<Pose2D> waypoints;
  double step = 0.06;
  double turn_step = 0.15;
  SensorSpec sensor;
};

const std::vector<std::string>& scenario_names();
Scenario make_scenario(const std::string& name);

}  // namespace wallmap::sim
