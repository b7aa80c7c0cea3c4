#include "wallmap/mapper.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace wallmap {

MeasurementNoise::MeasurementNoise(const Cov2& r) : r_(r) {
  if (r.eigenvalues().first < 1e-12) {
    throw std::invalid_argument("MeasurementNoise: R must be positive definite");
  }
}

MeasurementNoise MeasurementNoise::isotropic(double sigma) {
  return MeasurementNoise(Cov2::isotropic(sigma));
}

void MapperConfig::validate() const {
  if (!(kappa_init >= 1.0) || !std::isfinite(kappa_init)) {
    throw std::invalid_argument("MapperConfig: kappa_init must be >= 1");
  }
}

const Landmark* WallMap::find(std::int64_t id) const {
  const auto it = std::find_if(landmarks_.begin(), landmarks_.end(),
                               [id](const Landmark& lm) { return lm.id == id; });
  return it == landmarks_.end() ? nullptr : &*it;
}

std::int64_t WallMap::add(Landmark lm) {
  lm.id = next_id_++;
  landmarks_.push_back(std::move(lm));
  return landmarks_.back().id;
}

void WallMap::replace(const Landmark& lm) {
  const auto it = std::find_if(landmarks_.begin(), landmarks_.end(),
                               [&](const Landmark& existing) { return existing.id == lm.id; });
  if (it == landmarks_.end()) {
    throw std::invalid_argument("WallMap::replace: unknown landmark id");
  }
  *it = lm;
}

void WallMap::restore(Landmark lm) {
  if (find(lm.id) != nullptr) {
    throw std::invalid_argument("WallMap::restore: duplicate landmark id");
  }
  next_id_ = std::max(next_id_, lm.id + 1);
  landmarks_.push_back(std::move(lm));
}

Landmark init_landmark(const Observation& z, const Pose2D& pose, const MapperConfig& cfg,
                       std::int64_t frame) {
  cfg.validate();
  const auto mean = sensor_model::inverse(cfg.model, z.wall, pose);
  if (!mean) {
    throw NumericalError("init_landmark: inverse model degenerate for this observation");
  }
  const Eigen::Matrix2d g = sensor_model::inverse_jacobian(cfg.model, z.wall, pose);
  const Eigen::Matrix2d cov = cfg.kappa_init * g * cfg.noise.matrix() * g.transpose();
  return Landmark(0, *mean, Cov2(cov), 1, frame, frame);
}

Eigen::Matrix2d kalman_gain(const Cov2& cov, const Eigen::Matrix2d& h,
                            const MeasurementNoise& r) {
  const Eigen::Matrix2d innovation_cov = r.matrix() + h * cov.matrix() * h.transpose();
  return cov.matrix() * h.transpose() * innovation_cov.inverse();
}

Landmark ekf_update(const Landmark& lm, const Observation& z, const Pose2D& pose,
                    const MapperConfig& cfg, std::int64_t frame) {
  const auto predicted = sensor_model::forward(cfg.model, lm.mean, pose);
  if (!predicted) {
    throw NumericalError("ekf_update: degenerate measurement prediction");
  }
  const Eigen::Matrix2d h_jac = sensor_model::jacobian(cfg.model, lm.mean, pose);
  const Eigen::Matrix2d gain = kalman_gain(lm.cov, h_jac, cfg.noise);

  const Eigen::Vector2d innovation = z.wall.vec() - predicted->vec();
  const auto mean = make_wall_param(lm.mean.vec() + gain * innovation);
  if (!mean) {
    throw NumericalError("ekf_update: updated mean is degenerate");
  }

  Eigen::Matrix2d cov = (Eigen::Matrix2d::Identity() - gain * h_jac) * lm.cov.matrix();
  cov = 0.5 * (cov + cov.transpose());
  const auto [lo, hi] = symmetric_eigenvalues(cov);
  (void)hi;
  if (lo < -1e-9) {
    throw NumericalError("ekf_update: covariance update lost positive semi-definiteness");
  }
  if (lo < 0.0) {
    // Round-off guard: lift the spectrum so the Cov2 invariant holds.
    cov += (-lo) * Eigen::Matrix2d::Identity();
  }

  Landmark updated = lm;
  updated.mean = *mean;
  updated.cov = Cov2(cov);
  updated.hits = lm.hits + 1;
  updated.last_seen = std::max(lm.last_seen, frame);
  return updated;
}

}  // namespace wallmap
