#include "wallmap/sensor_model.hpp"

#include <cmath>

namespace wallmap {

std::string_view to_string(SensorModelKind kind) {
  return kind == SensorModelKind::paper ? "paper" : "hessian";
}

std::optional<SensorModelKind> sensor_model_from_string(std::string_view name) {
  if (name == "paper") {
    return SensorModelKind::paper;
  }
  if (name == "hessian") {
    return SensorModelKind::hessian;
  }
  return std::nullopt;
}

namespace sensor_model {

std::optional<WallParam> forward_paper(const WallParam& w, const Pose2D& pose) {
  const Eigen::Vector2d z = pose.rotation().transpose() * (w.vec() - pose.translation());
  return make_wall_param(z);
}

std::optional<WallParam> inverse_paper(const WallParam& z, const Pose2D& pose) {
  const Eigen::Vector2d w = pose.rotation() * z.vec() + pose.translation();
  return make_wall_param(w);
}

Eigen::Matrix2d jacobian_paper(const Pose2D& pose) { return pose.rotation().transpose(); }

Eigen::Matrix2d inverse_jacobian_paper(const Pose2D& pose) { return pose.rotation(); }

std::optional<WallParam> forward_hessian(const WallParam& w, const Pose2D& pose) {
  const double rho = w.range();
  const Eigen::Vector2d n = w.normal();
  const double rho_sensor = rho - n.dot(pose.translation());
  if (rho_sensor <= kDegenerateEps) {
    return std::nullopt;
  }
  return make_wall_param(rho_sensor * (pose.rotation().transpose() * n));
}

std::optional<WallParam> inverse_hessian(const WallParam& z, const Pose2D& pose) {
  const double rho_sensor = z.range();
  const Eigen::Vector2d n_world = pose.rotation() * z.normal();
  const double rho_world = rho_sensor + n_world.dot(pose.translation());
  if (std::abs(rho_world) <= kDegenerateEps) {
    return std::nullopt;
  }
  return make_wall_param(rho_world * n_world);
}

Eigen::Matrix2d jacobian_hessian(const WallParam& w, const Pose2D& pose) {
  const double rho = w.range();
  const Eigen::Vector2d n = w.normal();
  const Eigen::Vector2d t = pose.translation();
  const Eigen::Matrix2d tangent = (Eigen::Matrix2d::Identity() - n * n.transpose()) / rho;
  const double rho_sensor = rho - n.dot(t);
  // d(rho') = n' - t' * tangent; d(n) = tangent
  const Eigen::Matrix2d inner =
      n * (n.transpose() - t.transpose() * tangent) + rho_sensor * tangent;
  return pose.rotation().transpose() * inner;
}

Eigen::Matrix2d inverse_jacobian_hessian(const WallParam& z, const Pose2D& pose) {
  const double rho_sensor = z.range();
  const Eigen::Vector2d n_sensor = z.normal();
  const Eigen::Matrix2d rot = pose.rotation();
  const Eigen::Vector2d t = pose.translation();
  const Eigen::Matrix2d tangent =
      (Eigen::Matrix2d::Identity() - n_sensor * n_sensor.transpose()) / rho_sensor;
  const double rho_world = rho_sensor + (rot * n_sensor).dot(t);
  const Eigen::Matrix2d inner =
      n_sensor * (n_sensor.transpose() + t.transpose() * rot * tangent) + rho_world * tangent;
  return rot * inner;
}

std::optional<WallParam> mc_to_uv(const LineMC& line) {
  const double denom = line.m * line.m + 1.0;
  const Eigen::Vector2d w(-line.m * line.c / denom, line.c / denom);
  if (std::abs(line.c) < kDegenerateEps) {
    return std::nullopt;  // line through the origin
  }
  return make_wall_param(w);
}

std::optional<WallParam> forward(SensorModelKind kind, const WallParam& w, const Pose2D& pose) {
  return kind == SensorModelKind::paper ? forward_paper(w, pose) : forward_hessian(w, pose);
}

std::optional<WallParam> inverse(SensorModelKind kind, const WallParam& z, const Pose2D& pose) {
  return kind == SensorModelKind::paper ? inverse_paper(z, pose) : inverse_hessian(z, pose);
}

Eigen::Matrix2d jacobian(SensorModelKind kind, const WallParam& w, const Pose2D& pose) {
  return kind == SensorModelKind::paper ? jacobian_paper(pose) : jacobian_hessian(w, pose);
}

Eigen::Matrix2d inverse_jacobian(SensorModelKind kind, const WallParam& z, const Pose2D& pose) {
  return kind == SensorModelKind::paper ? inverse_jacobian_paper(pose)
                                        : inverse_jacobian_hessian(z, pose);
}

}  // namespace sensor_model
}  // namespace wallmap
