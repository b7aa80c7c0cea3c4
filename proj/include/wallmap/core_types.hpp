#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wallmap {

// Closest-point wall parameters within this distance of the frame origin are
// rejected: the (u, v) parameterization loses the line direction there.
inline constexpr double kDegenerateEps = 1e-6;

/// Thrown when an estimation step fails numerically (collapsed covariance,
/// indefinite update, landmark predicted on top of the sensor).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wraps theta into (-pi, pi]. Throws std::invalid_argument on non-finite input.
double normalize_angle(double theta);

/// Sensor/robot pose (x, y, theta) in the world frame. theta is normalized
/// to (-pi, pi] on construction.
class Pose2D {
 public:
  Pose2D() = default;
  Pose2D(double x, double y, double theta);

  double x() const { return x_; }
  double y() const { return y_; }
  double theta() const { return theta_; }

  Eigen::Vector2d translation() const { return {x_, y_}; }
  /// R(theta): rotates sensor-frame vectors into the world frame.
  Eigen::Matrix2d rotation() const;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double theta_ = 0.0;
};

/// A wall line represented by its closest point (u, v) to the frame origin.
/// The frame (world or sensor) depends on context. Non-degenerate by
/// construction: |(u, v)| >= kDegenerateEps.
class WallParam {
 public:
  WallParam(double u, double v) : WallParam(Eigen::Vector2d(u, v)) {}
  explicit WallParam(const Eigen::Vector2d& w);

  double u() const { return w_.x(); }
  double v() const { return w_.y(); }
  const Eigen::Vector2d& vec() const { return w_; }

  /// Distance from the frame origin to the line.
  double range() const { return w_.norm(); }
  /// Unit normal pointing from the origin toward the line.
  Eigen::Vector2d normal() const { return w_ / w_.norm(); }

 private:
  Eigen::Vector2d w_;
};

/// Non-throwing construction; nullopt when w is non-finite or degenerate.
std::optional<WallParam> make_wall_param(const Eigen::Vector2d& w);

/// Line v = m*u + c in the sensor ground plane. Lines near-vertical in this
/// chart are unrepresentable; the detector works in normal form instead.
struct LineMC {
  LineMC(double m, double c);
  double m;
  double c;
};

/// 2x2 symmetric positive-semidefinite covariance (m^2). Construction
/// symmetrizes the input and rejects matrices with an eigenvalue < -1e-12.
class Cov2 {
 public:
  Cov2() : m_(Eigen::Matrix2d::Zero()) {}
  explicit Cov2(const Eigen::Matrix2d& m);

  static Cov2 diagonal(double s_uu, double s_vv);
  static Cov2 isotropic(double sigma) { return diagonal(sigma * sigma, sigma * sigma); }

  const Eigen::Matrix2d& matrix() const { return m_; }

  /// Closed-form eigenvalues, ascending.
  std::pair<double, double> eigenvalues() const;

 private:
  Eigen::Matrix2d m_;
};

/// Closed-form eigenvalues of a symmetric 2x2 matrix, ascending.
std::pair<double, double> symmetric_eigenvalues(const Eigen::Matrix2d& m);

/// One estimated wall: per-landmark EKF state plus bookkeeping.
struct Landmark {
  Landmark(std::int64_t id, WallParam mean, Cov2 cov, int hits,
           std::int64_t first_seen, std::int64_t last_seen);

  std::int64_t id;
  WallParam mean;  // world frame
  Cov2 cov;
  int hits;
  std::int64_t first_seen;
  std::int64_t last_seen;
};

/// One horizontal row of depth-derived planar points in the sensor frame.
/// Invalid samples are stored as the canonical (NaN, NaN) sentinel; any
/// sample with a non-finite coordinate is normalized to it on construction.
class ScanRow {
 public:
  ScanRow() = default;
  explicit ScanRow(std::vector<Eigen::Vector2d> samples);

  static Eigen::Vector2d invalid_sample();
  static bool sample_valid(const Eigen::Vector2d& p);

  std::size_t width() const { return samples_.size(); }
  bool valid(std::size_t i) const { return sample_valid(samples_[i]); }
  const Eigen::Vector2d& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<Eigen::Vector2d>& samples() const { return samples_; }

 private:
  std::vector<Eigen::Vector2d> samples_;
};

/// One detected wall in the sensor frame, with supporting-point count and
/// optional endpoint extent (metadata only; the estimated state is the line).
struct Observation {
  using Extent = std::pair<Eigen::Vector2d, Eigen::Vector2d>;

  explicit Observation(WallParam wall, int inliers, std::optional<Extent> extent = std::nullopt);

  WallParam wall;  // sensor frame
  int inliers;
  std::optional<Extent> extent;  // sensor frame
};

}  // namespace wallmap
