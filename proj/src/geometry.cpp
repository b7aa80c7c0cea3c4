#include "wallmap/geometry.hpp"

#include <cmath>

namespace wallmap::geometry {

NormalLine NormalLine::from_normal_distance(const Eigen::Vector2d& n, double rho) {
  const double norm = n.norm();
  if (!(norm > 0.0) || !n.allFinite() || !std::isfinite(rho)) {
    throw std::invalid_argument("NormalLine: invalid normal/distance");
  }
  Eigen::Vector2d unit = n / norm;
  double d = rho / norm;
  if (d < 0.0) {
    unit = -unit;
    d = -d;
  }
  if (d == 0.0 && (unit.x() < 0.0 || (unit.x() == 0.0 && unit.y() < 0.0))) {
    unit = -unit;
  }
  return {unit, d};
}

std::optional<NormalLine> NormalLine::through_points(const Eigen::Vector2d& a,
                                                     const Eigen::Vector2d& b) {
  const Eigen::Vector2d d = b - a;
  const double len = d.norm();
  if (!(len > 1e-12)) {
    return std::nullopt;
  }
  const Eigen::Vector2d n(-d.y() / len, d.x() / len);
  return from_normal_distance(n, n.dot(a));
}

std::optional<NormalLine> fit_line_tls(std::span<const Eigen::Vector2d> points) {
  if (points.size() < 2) {
    return std::nullopt;
  }
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : points) {
    centroid += p;
  }
  centroid /= static_cast<double>(points.size());

  // Scatter matrix; its minor eigenvector is the line normal.
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const Eigen::Vector2d q = p - centroid;
    sxx += q.x() * q.x();
    sxy += q.x() * q.y();
    syy += q.y() * q.y();
  }
  const double mid = 0.5 * (sxx + syy);
  const double radius = std::hypot(0.5 * (sxx - syy), sxy);
  if (!(mid + radius > 0.0)) {
    return std::nullopt;  // all points coincident
  }
  const double lambda_max = mid + radius;
  // Direction = major eigenvector; pick the numerically better expression.
  Eigen::Vector2d dir;
  const Eigen::Vector2d cand1(sxy, lambda_max - sxx);
  const Eigen::Vector2d cand2(lambda_max - syy, sxy);
  dir = cand1.norm() >= cand2.norm() ? cand1 : cand2;
  const double dn = dir.norm();
  if (!(dn > 0.0)) {
    // Isotropic scatter; no preferred direction.
    return std::nullopt;
  }
  dir /= dn;
  const Eigen::Vector2d n(-dir.y(), dir.x());
  return NormalLine::from_normal_distance(n, n.dot(centroid));
}

NormalLine normal_line_from_mc(const LineMC& line) {
  // v = m*u + c  <=>  (-m, 1).(u, v) = c
  return NormalLine::from_normal_distance(Eigen::Vector2d(-line.m, 1.0), line.c);
}

std::optional<LineMC> mc_from_normal_line(const NormalLine& line, double tol) {
  if (std::abs(line.n.y()) < tol) {
    return std::nullopt;
  }
  return LineMC(-line.n.x() / line.n.y(), line.rho / line.n.y());
}

std::optional<Eigen::Vector2d> foot_of_perpendicular(const Eigen::Vector2d& a,
                                                     const Eigen::Vector2d& b) {
  const auto line = NormalLine::through_points(a, b);
  if (!line) {
    return std::nullopt;
  }
  return line->closest_point();
}

}  // namespace wallmap::geometry
