#pragma once

#include "wallmap/core_types.hpp"
#include "wallmap/mapper.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace wallmap {

struct AssociationConfig {
  /// Threshold on the squared Mahalanobis exponent d^2 (chi-square, 2 dof);
  /// 9.21 is the 99% quantile.
  double gate = 9.21;
  /// false: Sigma = landmark covariance (the likelihood as published);
  /// true: Sigma = H cov H^T + R (innovation covariance).
  bool use_innovation_cov = false;

  void validate() const;
};

/// Per-observation outcome: a landmark id with the match's d^2, or a new wall.
struct Association {
  std::optional<std::int64_t> landmark_id;
  double d2 = std::numeric_limits<double>::infinity();

  bool is_new() const { return !landmark_id.has_value(); }
};

struct AssociationResult {
  std::vector<Association> matches;  // parallel to the observation list
};

/// Squared Mahalanobis exponent d^2 = (z - h)^T Sigma^-1 (z - h); the
/// likelihood is proportional to exp(-0.5 d^2), so comparisons use d^2
/// directly. Returns +infinity when the landmark's prediction at this pose
/// is degenerate. Throws NumericalError when Sigma is singular.
double likelihood_exponent(const Observation& z, const Landmark& lm, const Pose2D& pose,
                           const AssociationConfig& cfg, const MapperConfig& model_cfg);

/// Exhaustive maximum-likelihood association: d^2 of every observation
/// against every landmark, then greedy one-to-one assignment in ascending
/// d^2 order (ties: lower landmark id, then lower observation index).
/// Observations whose best admissible d^2 exceeds the gate become new walls.
AssociationResult associate(const std::vector<Observation>& observations, const WallMap& map,
                            const Pose2D& pose, const AssociationConfig& cfg,
                            const MapperConfig& model_cfg);

}  // namespace wallmap
