#pragma once

#include "wallmap/core_types.hpp"
#include "wallmap/sensor_model.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace wallmap {

/// Sensor-frame observation covariance R; must be positive definite.
class MeasurementNoise {
 public:
  explicit MeasurementNoise(const Cov2& r);
  static MeasurementNoise isotropic(double sigma);

  const Cov2& cov() const { return r_; }
  const Eigen::Matrix2d& matrix() const { return r_.matrix(); }

 private:
  Cov2 r_;
};

struct MapperConfig {
  MeasurementNoise noise = MeasurementNoise::isotropic(0.05);
  double kappa_init = 2.0;  // covariance inflation on new landmarks
  SensorModelKind model = SensorModelKind::paper;

  void validate() const;
};

/// The inferred wall configuration: an ordered set of landmarks with unique,
/// stable ids. Single writer; landmarks are independent (one EKF each).
class WallMap {
 public:
  const std::vector<Landmark>& landmarks() const { return landmarks_; }
  std::size_t size() const { return landmarks_.size(); }
  bool empty() const { return landmarks_.empty(); }

  const Landmark* find(std::int64_t id) const;

  /// Stamps the landmark with the next free id and appends it.
  std::int64_t add(Landmark lm);
  /// Reinserts an updated landmark by id; throws if the id is unknown.
  void replace(const Landmark& lm);
  /// Appends a landmark keeping its id (replay/import path); throws on duplicates.
  void restore(Landmark lm);

  std::int64_t next_id() const { return next_id_; }

 private:
  std::vector<Landmark> landmarks_;
  std::int64_t next_id_ = 1;
};

/// New landmark from an unmatched observation: mean through the configured
/// inverse model, covariance G * R * G^T * kappa_init with G the
/// inverse-model Jacobian. Throws NumericalError if the inverse model is
/// degenerate at this pose.
Landmark init_landmark(const Observation& z, const Pose2D& pose, const MapperConfig& cfg,
                       std::int64_t frame = 0);

/// K = cov * H^T * (R + H * cov * H^T)^-1.
Eigen::Matrix2d kalman_gain(const Cov2& cov, const Eigen::Matrix2d& h,
                            const MeasurementNoise& r);

/// One EKF measurement update of a single landmark:
///   mean <- mean + K (z - h),  cov <- (I - K H) cov  (re-symmetrized).
/// Throws NumericalError when the prediction is degenerate or the updated
/// covariance develops an eigenvalue below -1e-9.
Landmark ekf_update(const Landmark& lm, const Observation& z, const Pose2D& pose,
                    const MapperConfig& cfg, std::int64_t frame);

}  // namespace wallmap
