#include "wallmap/core_types.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace wallmap {

namespace {
constexpr double kPi = std::numbers::pi;
}

double normalize_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("normalize_angle: non-finite angle");
  }
  double a = std::fmod(theta, 2.0 * kPi);  // (-2pi, 2pi)
  if (a <= -kPi) {
    a += 2.0 * kPi;
  } else if (a > kPi) {
    a -= 2.0 * kPi;
  }
  return a;
}

Pose2D::Pose2D(double x, double y, double theta) : x_(x), y_(y), theta_(normalize_angle(theta)) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw std::invalid_argument("Pose2D: non-finite translation");
  }
}

Eigen::Matrix2d Pose2D::rotation() const {
  const double c = std::cos(theta_);
  const double s = std::sin(theta_);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

WallParam::WallParam(const Eigen::Vector2d& w) : w_(w) {
  if (!w.allFinite()) {
    throw std::invalid_argument("WallParam: non-finite parameters");
  }
  if (w.norm() < kDegenerateEps) {
    throw std::invalid_argument("WallParam: degenerate (closest point at the frame origin)");
  }
}

std::optional<WallParam> make_wall_param(const Eigen::Vector2d& w) {
  if (!w.allFinite() || w.norm() < kDegenerateEps) {
    return std::nullopt;
  }
  return WallParam(w);
}

LineMC::LineMC(double m_in, double c_in) : m(m_in), c(c_in) {
  if (!std::isfinite(m) || !std::isfinite(c)) {
    throw std::invalid_argument("LineMC: non-finite parameters");
  }
}

std::pair<double, double> symmetric_eigenvalues(const Eigen::Matrix2d& m) {
  const double a = m(0, 0);
  const double b = 0.5 * (m(0, 1) + m(1, 0));
  const double c = m(1, 1);
  const double mid = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  return {mid - radius, mid + radius};
}

Cov2::Cov2(const Eigen::Matrix2d& m) {
  if (!m.allFinite()) {
    throw std::invalid_argument("Cov2: non-finite matrix");
  }
  m_ = 0.5 * (m + m.transpose());
  const auto [lo, hi] = symmetric_eigenvalues(m_);
  (void)hi;
  if (lo < -1e-12) {
    throw std::invalid_argument("Cov2: matrix is not positive semi-definite");
  }
}

Cov2 Cov2::diagonal(double s_uu, double s_vv) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(0, 0) = s_uu;
  m(1, 1) = s_vv;
  return Cov2(m);
}

std::pair<double, double> Cov2::eigenvalues() const { return symmetric_eigenvalues(m_); }

Landmark::Landmark(std::int64_t id_in, WallParam mean_in, Cov2 cov_in, int hits_in,
                   std::int64_t first_seen_in, std::int64_t last_seen_in)
    : id(id_in),
      mean(mean_in),
      cov(cov_in),
      hits(hits_in),
      first_seen(first_seen_in),
      last_seen(last_seen_in) {
  if (hits < 1) {
    throw std::invalid_argument("Landmark: hits must be >= 1");
  }
  if (last_seen < first_seen) {
    throw std::invalid_argument("Landmark: last_seen precedes first_seen");
  }
}

ScanRow::ScanRow(std::vector<Eigen::Vector2d> samples) : samples_(std::move(samples)) {
  for (auto& p : samples_) {
    if (!p.allFinite()) {
      p = invalid_sample();
    }
  }
}

Eigen::Vector2d ScanRow::invalid_sample() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan};
}

bool ScanRow::sample_valid(const Eigen::Vector2d& p) { return p.allFinite(); }

Observation::Observation(WallParam wall_in, int inliers_in, std::optional<Extent> extent_in)
    : wall(wall_in), inliers(inliers_in), extent(std::move(extent_in)) {
  if (inliers < 2) {
    throw std::invalid_argument("Observation: a line needs at least 2 supporting points");
  }
  if (extent && (!extent->first.allFinite() || !extent->second.allFinite())) {
    throw std::invalid_argument("Observation: non-finite extent");
  }
}

}  // namespace wallmap
