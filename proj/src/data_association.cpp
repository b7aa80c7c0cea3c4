#include "wallmap/data_association.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace wallmap {

void AssociationConfig::validate() const {
  if (!(gate > 0.0) || !std::isfinite(gate)) {
    throw std::invalid_argument("AssociationConfig: gate must be > 0");
  }
}

double likelihood_exponent(const Observation& z, const Landmark& lm, const Pose2D& pose,
                           const AssociationConfig& cfg, const MapperConfig& model_cfg) {
  const auto predicted = sensor_model::forward(model_cfg.model, lm.mean, pose);
  if (!predicted) {
    return std::numeric_limits<double>::infinity();
  }
  Eigen::Matrix2d sigma = lm.cov.matrix();
  if (cfg.use_innovation_cov) {
    const Eigen::Matrix2d h_jac = sensor_model::jacobian(model_cfg.model, lm.mean, pose);
    sigma = h_jac * sigma * h_jac.transpose() + model_cfg.noise.matrix();
    sigma = 0.5 * (sigma + sigma.transpose());
  }
  const auto [lo, hi] = symmetric_eigenvalues(sigma);
  (void)hi;
  if (lo <= 1e-15) {
    throw NumericalError("likelihood_exponent: singular covariance in the gate");
  }
  const Eigen::LLT<Eigen::Matrix2d> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("likelihood_exponent: covariance not positive definite");
  }
  const Eigen::Vector2d residual = z.wall.vec() - predicted->vec();
  const double d2 = residual.dot(llt.solve(residual));
  return std::max(d2, 0.0);
}

AssociationResult associate(const std::vector<Observation>& observations, const WallMap& map,
                            const Pose2D& pose, const AssociationConfig& cfg,
                            const MapperConfig& model_cfg) {
  cfg.validate();
  AssociationResult result;
  result.matches.resize(observations.size());

  struct Candidate {
    double d2;
    std::int64_t landmark_id;
    std::size_t obs_index;
    std::size_t lm_index;
  };
  std::vector<Candidate> candidates;
  for (std::size_t oi = 0; oi < observations.size(); ++oi) {
    for (std::size_t li = 0; li < map.landmarks().size(); ++li) {
      const Landmark& lm = map.landmarks()[li];
      const double d2 = likelihood_exponent(observations[oi], lm, pose, cfg, model_cfg);
      if (d2 <= cfg.gate) {
        candidates.push_back({d2, lm.id, oi, li});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.d2, a.landmark_id, a.obs_index) <
           std::tie(b.d2, b.landmark_id, b.obs_index);
  });

  std::vector<bool> lm_taken(map.landmarks().size(), false);
  std::vector<bool> obs_taken(observations.size(), false);
  for (const Candidate& c : candidates) {
    if (obs_taken[c.obs_index] || lm_taken[c.lm_index]) {
      continue;
    }
    obs_taken[c.obs_index] = true;
    lm_taken[c.lm_index] = true;
    result.matches[c.obs_index] = Association{c.landmark_id, c.d2};
  }
  return result;
}

}  // namespace wallmap
