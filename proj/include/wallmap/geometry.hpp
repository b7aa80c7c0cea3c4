#pragma once

#include "wallmap/core_types.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>

namespace wallmap::geometry {

/// Line in Hessian normal form: { p : n.dot(p) == rho } with |n| = 1 and
/// rho >= 0. Singularity-free alternative to slope/intercept; the closest
/// point to the origin is rho * n.
struct NormalLine {
  Eigen::Vector2d n{1.0, 0.0};
  double rho = 0.0;

  Eigen::Vector2d closest_point() const { return rho * n; }
  Eigen::Vector2d direction() const { return {-n.y(), n.x()}; }
  double distance_to(const Eigen::Vector2d& p) const { return std::abs(n.dot(p) - rho); }

  /// Normalizes (n, rho) to |n| = 1, rho >= 0; flips n when rho < 0.
  /// When rho == 0 the normal sign is fixed lexicographically.
  static NormalLine from_normal_distance(const Eigen::Vector2d& n, double rho);

  /// Line through two points; nullopt when the points (nearly) coincide.
  static std::optional<NormalLine> through_points(const Eigen::Vector2d& a,
                                                  const Eigen::Vector2d& b);
};

/// Total-least-squares line fit (orthogonal regression) via the scatter
/// matrix of the points. nullopt for fewer than 2 points or a degenerate
/// (single-point) configuration.
std::optional<NormalLine> fit_line_tls(std::span<const Eigen::Vector2d> points);

/// Exact conversion of v = m*u + c into normal form.
NormalLine normal_line_from_mc(const LineMC& line);

/// Inverse of the above. nullopt when the line is (near-)vertical in the
/// (u, v) chart, i.e. |n.y| below tol.
std::optional<LineMC> mc_from_normal_line(const NormalLine& line, double tol = 1e-9);

/// Foot of the perpendicular from the origin onto the line through a and b.
/// nullopt when a and b (nearly) coincide.
std::optional<Eigen::Vector2d> foot_of_perpendicular(const Eigen::Vector2d& a,
                                                     const Eigen::Vector2d& b);

}  // namespace wallmap::geometry
