#include "wallmap/simulator.hpp"

#include "wallmap/geometry.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace wallmap::sim {

Environment::Environment(std::vector<WallSegment> walls) : walls_(std::move(walls)) {
  for (const WallSegment& seg : walls_) {
    if (!seg.a.allFinite() || !seg.b.allFinite()) {
      throw std::invalid_argument("Environment: non-finite segment endpoint");
    }
    if (!((seg.b - seg.a).norm() > 0.0)) {
      throw std::invalid_argument("Environment: zero-length wall segment");
    }
    const auto line = geometry::NormalLine::through_points(seg.a, seg.b);
    if (!line || line->rho < kDegenerateEps) {
      throw std::invalid_argument(
          "Environment: wall supporting line passes through the world origin");
    }
  }
}

std::vector<WallParam> Environment::ground_truth_walls() const {
  std::vector<WallParam> truth;
  truth.reserve(walls_.size());
  for (const WallSegment& seg : walls_) {
    truth.push_back(WallParam(*geometry::foot_of_perpendicular(seg.a, seg.b)));
  }
  return truth;
}

void SensorSpec::validate() const {
  constexpr double pi = 3.14159265358979323846;
  if (!(fov > 0.0) || !(fov < pi)) {
    throw std::invalid_argument("SensorSpec: fov must be in (0, pi)");
  }
  if (samples < 2) {
    throw std::invalid_argument("SensorSpec: samples must be >= 2");
  }
  if (!(max_range > 0.0)) {
    throw std::invalid_argument("SensorSpec: max_range must be > 0");
  }
  if (sigma < 0.0 || !std::isfinite(sigma)) {
    throw std::invalid_argument("SensorSpec: sigma must be >= 0");
  }
  if (dropout < 0.0 || dropout > 1.0) {
    throw std::invalid_argument("SensorSpec: dropout must be in [0, 1]");
  }
}

namespace {

// Range along the ray (origin o, unit direction d) to segment [a, b];
// negative when there is no hit.
double ray_segment_range(const Eigen::Vector2d& o, const Eigen::Vector2d& d,
                         const WallSegment& seg) {
  const Eigen::Vector2d e = seg.b - seg.a;
  const double denom = d.x() * e.y() - d.y() * e.x();
  if (std::abs(denom) < 1e-15) {
    return -1.0;  // ray parallel to the segment
  }
  const Eigen::Vector2d ao = seg.a - o;
  const double t = (ao.x() * e.y() - ao.y() * e.x()) / denom;  // along the ray
  const double s = (ao.x() * d.y() - ao.y() * d.x()) / denom;  // along the segment
  if (t <= 1e-12 || s < 0.0 || s > 1.0) {
    return -1.0;
  }
  return t;
}

struct Hit {
  double range = -1.0;
  int segment = -1;
};

Hit nearest_hit(const Environment& env, const Eigen::Vector2d& origin,
                const Eigen::Vector2d& dir, double max_range) {
  Hit best;
  for (std::size_t k = 0; k < env.walls().size(); ++k) {
    const double t = ray_segment_range(origin, dir, env.walls()[k]);
    if (t > 0.0 && t <= max_range && (best.segment < 0 || t < best.range)) {
      best.range = t;
      best.segment = static_cast<int>(k);
    }
  }
  return best;
}

double bearing_at(const SensorSpec& spec, int i) {
  return -0.5 * spec.fov + spec.fov * static_cast<double>(i) / (spec.samples - 1);
}

}  // namespace

ScanRow raycast_row(const Environment& env, const Pose2D& pose, const SensorSpec& spec) {
  spec.validate();
  std::vector<Eigen::Vector2d> samples(static_cast<std::size_t>(spec.samples),
                                       ScanRow::invalid_sample());
  const Eigen::Vector2d origin = pose.translation();
  for (int i = 0; i < spec.samples; ++i) {
    const double bearing = bearing_at(spec, i);
    const double world_angle = pose.theta() + bearing;
    const Eigen::Vector2d dir(std::cos(world_angle), std::sin(world_angle));
    const Hit hit = nearest_hit(env, origin, dir, spec.max_range);
    if (hit.segment >= 0) {
      // Sensor-frame point straight from (range, bearing); exact by construction.
      samples[static_cast<std::size_t>(i)] =
          hit.range * Eigen::Vector2d(std::cos(bearing), std::sin(bearing));
    }
  }
  return ScanRow(std::move(samples));
}

ScanRow corrupt(const ScanRow& row, const SensorSpec& spec, std::mt19937_64& rng) {
  spec.validate();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<Eigen::Vector2d> samples(row.samples());
  for (auto& p : samples) {
    if (!ScanRow::sample_valid(p)) {
      continue;
    }
    if (spec.sigma > 0.0) {
      const double range = p.norm();
      const double sigma_eff = spec.sigma * range * range;
      const double noisy = range + sigma_eff * gauss(rng);
      if (noisy <= 0.0) {
        p = ScanRow::invalid_sample();
        continue;
      }
      p *= noisy / range;
    }
    if (spec.dropout > 0.0 && uniform(rng) < spec.dropout) {
      p = ScanRow::invalid_sample();
    }
  }
  return ScanRow(std::move(samples));
}

ScanRow corrupt(const ScanRow& row, const SensorSpec& spec) {
  std::mt19937_64 rng(spec.rng_seed);
  return corrupt(row, spec, rng);
}

std::vector<Pose2D> generate_trajectory(const std::vector<Pose2D>& waypoints, double step,
                                        double turn_step) {
  if (waypoints.size() < 2) {
    throw std::invalid_argument("generate_trajectory: need at least 2 waypoints");
  }
  if (!(step > 0.0) || !(turn_step > 0.0)) {
    throw std::invalid_argument("generate_trajectory: step and turn_step must be > 0");
  }
  std::vector<Pose2D> poses;
  double heading = waypoints.front().theta();
  poses.emplace_back(waypoints.front().x(), waypoints.front().y(), heading);

  for (std::size_t k = 0; k + 1 < waypoints.size(); ++k) {
    const Eigen::Vector2d from = waypoints[k].translation();
    const Eigen::Vector2d to = waypoints[k + 1].translation();
    const Eigen::Vector2d delta = to - from;
    const double length = delta.norm();
    if (!(length > 0.0)) {
      continue;
    }
    const double target = std::atan2(delta.y(), delta.x());
    const int n_steps = static_cast<int>(std::ceil(length / step - 1e-12));
    for (int i = 1; i <= n_steps; ++i) {
      const double advance = std::min(static_cast<double>(i) * step, length);
      const Eigen::Vector2d p = from + delta * (advance / length);
      const double diff = normalize_angle(target - heading);
      heading = normalize_angle(heading + std::clamp(diff, -turn_step, turn_step));
      poses.emplace_back(p.x(), p.y(), heading);
    }
  }
  return poses;
}

std::vector<WallParam> ground_truth_observation(const Environment& env, const Pose2D& pose,
                                                const SensorSpec& spec, SensorModelKind model) {
  spec.validate();
  std::set<int> visible;
  const Eigen::Vector2d origin = pose.translation();
  for (int i = 0; i < spec.samples; ++i) {
    const double world_angle = pose.theta() + bearing_at(spec, i);
    const Eigen::Vector2d dir(std::cos(world_angle), std::sin(world_angle));
    const Hit hit = nearest_hit(env, origin, dir, spec.max_range);
    if (hit.segment >= 0) {
      visible.insert(hit.segment);
    }
  }

  const Eigen::Matrix2d rot_inv = pose.rotation().transpose();
  std::vector<WallParam> result;
  for (const int k : visible) {
    const WallSegment& seg = env.walls()[static_cast<std::size_t>(k)];
    std::optional<Eigen::Vector2d> closest;
    if (model == SensorModelKind::hessian) {
      // Transform the segment endpoints, then take the foot of the
      // perpendicular of the transformed supporting line.
      closest = geometry::foot_of_perpendicular(rot_inv * (seg.a - origin),
                                                rot_inv * (seg.b - origin));
    } else {
      // The point-style model observes the transformed world closest point.
      const auto world = geometry::foot_of_perpendicular(seg.a, seg.b);
      closest = rot_inv * (*world - origin);
    }
    if (closest) {
      if (auto wall = make_wall_param(*closest)) {
        result.push_back(*wall);
      }
    }
  }
  return result;
}

namespace {

Environment rectangle_room(double half_x, double half_y) {
  const Eigen::Vector2d c1(-half_x, -half_y), c2(half_x, -half_y), c3(half_x, half_y),
      c4(-half_x, half_y);
  return Environment({{c1, c2}, {c2, c3}, {c3, c4}, {c4, c1}});
}

Pose2D wp(double x, double y, double theta = 0.0) { return Pose2D(x, y, theta); }

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"single_wall", "corner", "square_room",
                                                 "corridor", "l_room"};
  return names;
}

Scenario make_scenario(const std::string& name) {
  Scenario sc;
  sc.name = name;
  if (name == "single_wall") {
    sc.env = Environment({{{2.0, -5.0}, {2.0, 5.0}}});
    sc.waypoints = {wp(-0.5, 0.0), wp(0.6, 0.0)};
    sc.step = 0.02;
  } else if (name == "corner") {
    sc.env = Environment({{{1.2, -0.6}, {1.2, 1.2}}, {{1.2, 1.2}, {-0.6, 1.2}}});
    constexpr double quarter_pi = 0.78539816339744830961;
    sc.waypoints = {wp(-0.35, -0.35, quarter_pi), wp(0.3, 0.3, quarter_pi)};
    sc.step = 0.015;
    sc.sensor.max_range = 2.5;
  } else if (name == "square_room") {
    // 3x3 m room, ranges capped so quadratic depth noise stays workable
    sc.env = rectangle_room(1.5, 1.5);
    sc.waypoints = {wp(-0.8, -0.8), wp(0.8, -0.8), wp(0.8, 0.8),
                    wp(-0.8, 0.8), wp(-0.8, -0.8)};
    sc.step = 0.032;  // ~200 frames around the loop
    sc.sensor.max_range = 1.7;
  } else if (name == "corridor") {
    sc.env = Environment({{{-6.0, -1.2}, {6.0, -1.2}}, {{-6.0, 1.2}, {6.0, 1.2}}});
    sc.waypoints = {wp(-4.5, 0.0), wp(4.5, 0.0)};
    sc.step = 0.045;
  } else if (name == "l_room") {
    // 3x3 outline with the top-right quadrant cut away at (0.7, 0.7); the
    // loop approaches every wall head-on at some point
    sc.env = Environment({
        {{-1.5, -1.5}, {1.5, -1.5}},  // y = -1.5
        {{1.5, -1.5}, {1.5, 0.7}},    // x = 1.5
        {{1.5, 0.7}, {0.7, 0.7}},     // y = 0.7 (inner, bottom of the cut)
        {{0.7, 0.7}, {0.7, 1.5}},     // x = 0.7 (inner, side of the cut)
        {{0.7, 1.5}, {-1.5, 1.5}},    // y = 1.5
        {{-1.5, 1.5}, {-1.5, -1.5}},  // x = -1.5
    });
    sc.waypoints = {wp(-0.9, -0.9), wp(0.9, -0.9), wp(0.9, -0.1), wp(-0.1, -0.1),
                    wp(-0.1, 0.9),  wp(0.2, 0.9),  wp(-0.9, 0.9), wp(-0.9, -0.9)};
    sc.step = 0.0355;
    sc.sensor.max_range = 1.7;
  } else {
    throw std::invalid_argument("unknown scenario '" + name + "'");
  }
  if (sc.waypoints.size() >= 2) {
    // Start looking along the first leg.
    const Eigen::Vector2d d = sc.waypoints[1].translation() - sc.waypoints[0].translation();
    if (sc.waypoints[0].theta() == 0.0 && d.norm() > 0.0) {
      sc.waypoints[0] = Pose2D(sc.waypoints[0].x(), sc.waypoints[0].y(),
                               std::atan2(d.y(), d.x()));
    }
  }
  return sc;
}

}  // namespace wallmap::sim
