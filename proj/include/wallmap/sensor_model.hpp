#pragma once

#include "wallmap/core_types.hpp"

#include <Eigen/Core>

#include <optional>
#include <string_view>

namespace wallmap {

/// Observation-model choice. `paper` transforms the closest-point parameter
/// as a Euclidean point, which is exact only when the sensor translation is
/// parallel to the wall normal. `hessian` transforms the line itself and is
/// exact for every pose.
enum class SensorModelKind { paper, hessian };

std::string_view to_string(SensorModelKind kind);
std::optional<SensorModelKind> sensor_model_from_string(std::string_view name);

namespace sensor_model {

/// Point-style forward model: z = R(-theta) * (w - t). nullopt when the
/// result is degenerate (closest point at the sensor origin).
std::optional<WallParam> forward_paper(const WallParam& w, const Pose2D& pose);

/// Inverse of forward_paper: w = R(theta) * z + t.
std::optional<WallParam> inverse_paper(const WallParam& z, const Pose2D& pose);

/// d forward_paper / d(u, v) = R(-theta); independent of w.
Eigen::Matrix2d jacobian_paper(const Pose2D& pose);

/// d inverse_paper / d(u', v') = R(theta); independent of z.
Eigen::Matrix2d inverse_jacobian_paper(const Pose2D& pose);

/// Exact forward model. With rho = |w|, n = w / rho the transformed line has
/// sensor-frame distance rho' = rho - n.dot(t) and normal R(-theta) * n, so
/// z = rho' * R(-theta) * n. nullopt when rho' <= kDegenerateEps (the sensor
/// lies on, or has crossed, the wall line).
std::optional<WallParam> forward_hessian(const WallParam& w, const Pose2D& pose);

/// Exact inverse: rho = |z| + (R(theta) * z/|z|).dot(t), w = rho * R(theta) * z/|z|.
/// nullopt when the world-frame line passes through the world origin.
std::optional<WallParam> inverse_hessian(const WallParam& z, const Pose2D& pose);

/// Analytic d forward_hessian / d(u, v).
Eigen::Matrix2d jacobian_hessian(const WallParam& w, const Pose2D& pose);

/// Analytic d inverse_hessian / d(u', v').
Eigen::Matrix2d inverse_jacobian_hessian(const WallParam& z, const Pose2D& pose);

/// Slope/intercept to closest point: u = -m*c / (m^2 + 1), v = c / (m^2 + 1).
/// nullopt when the line passes through the origin (|c| < kDegenerateEps).
std::optional<WallParam> mc_to_uv(const LineMC& line);

// Dispatch on the configured model.
std::optional<WallParam> forward(SensorModelKind kind, const WallParam& w, const Pose2D& pose);
std::optional<WallParam> inverse(SensorModelKind kind, const WallParam& z, const Pose2D& pose);
Eigen::Matrix2d jacobian(SensorModelKind kind, const WallParam& w, const Pose2D& pose);
Eigen::Matrix2d inverse_jacobian(SensorModelKind kind, const WallParam& z, const Pose2D& pose);

}  // namespace sensor_model

}  // namespace wallmap
