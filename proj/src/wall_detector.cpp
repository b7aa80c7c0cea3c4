#include "wallmap/wall_detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wallmap {

void DetectorConfig::validate() const {
  if (ransac_iterations < 1) {
    throw std::invalid_argument("DetectorConfig: ransac_iterations must be >= 1");
  }
  if (!(inlier_threshold > 0.0) || !std::isfinite(inlier_threshold)) {
    throw std::invalid_argument("DetectorConfig: inlier_threshold must be > 0");
  }
  if (min_inliers < 2) {
    throw std::invalid_argument("DetectorConfig: min_inliers must be >= 2");
  }
  if (min_cluster_size < min_inliers) {
    throw std::invalid_argument("DetectorConfig: min_cluster_size must be >= min_inliers");
  }
  if (max_lines_per_cluster < 1) {
    throw std::invalid_argument("DetectorConfig: max_lines_per_cluster must be >= 1");
  }
  if (!(max_point_gap > 0.0)) {
    throw std::invalid_argument("DetectorConfig: max_point_gap must be > 0");
  }
}

std::vector<Cluster> cluster_by_invalid(const ScanRow& row, int min_cluster_size) {
  std::vector<Cluster> clusters;
  Cluster current;
  auto flush = [&]() {
    if (static_cast<int>(current.points.size()) >= std::max(min_cluster_size, 1)) {
      clusters.push_back(std::move(current));
    }
    current = Cluster{};
  };
  for (std::size_t i = 0; i < row.width(); ++i) {
    if (row.valid(i)) {
      if (current.points.empty()) {
        current.row_begin = i;
      }
      current.points.push_back(row[i]);
    } else {
      flush();
    }
  }
  flush();
  return clusters;
}

std::vector<Cluster> split_on_gaps(const std::vector<Cluster>& clusters, double max_gap,
                                   int min_cluster_size) {
  std::vector<Cluster> result;
  for (const Cluster& cluster : clusters) {
    Cluster current{cluster.row_begin, {}};
    auto flush = [&]() {
      if (static_cast<int>(current.points.size()) >= std::max(min_cluster_size, 1)) {
        result.push_back(std::move(current));
      }
      current.points.clear();
    };
    for (std::size_t i = 0; i < cluster.points.size(); ++i) {
      if (!current.points.empty() &&
          (cluster.points[i] - cluster.points[i - 1]).norm() > max_gap) {
        flush();
      }
      if (current.points.empty()) {
        current.row_begin = cluster.row_begin + i;
      }
      current.points.push_back(cluster.points[i]);
    }
    flush();
  }
  return result;
}

namespace {

std::vector<std::size_t> inliers_of(std::span<const Eigen::Vector2d> points,
                                    const geometry::NormalLine& line, double threshold) {
  std::vector<std::size_t> result;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (line.distance_to(points[i]) <= threshold) {
      result.push_back(i);
    }
  }
  return result;
}

}  // namespace

std::optional<LineFit> ransac_fit_line(std::span<const Eigen::Vector2d> points,
                                       const DetectorConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  if (points.size() < 2) {
    return std::nullopt;
  }
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);

  // Truncated-quadratic consensus: each point contributes
  // tau^2 - min(d^2, tau^2), so tight fits beat loose ones that merely
  // straddle more points (corner diagonals, chords across depth groups).
  const double tau_sq = cfg.inlier_threshold * cfg.inlier_threshold;
  std::optional<geometry::NormalLine> best_line;
  double best_score = 0.0;
  std::size_t best_count = 0;
  for (int iter = 0; iter < cfg.ransac_iterations; ++iter) {
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (j == i) {
      j = (j + 1) % points.size();
    }
    const auto hypothesis = geometry::NormalLine::through_points(points[i], points[j]);
    if (!hypothesis) {
      continue;  // coincident pair, counted against the budget
    }
    double score = 0.0;
    std::size_t count = 0;
    for (const auto& p : points) {
      const double d = hypothesis->distance_to(p);
      const double d_sq = d * d;
      if (d_sq < tau_sq) {
        score += tau_sq - d_sq;
        ++count;
      }
    }
    if (score > best_score) {
      best_score = score;
      best_count = count;
      best_line = *hypothesis;
    }
  }
  if (!best_line || best_count < static_cast<std::size_t>(cfg.min_inliers)) {
    return std::nullopt;
  }

  // Refine over the hypothesis inliers, then recount once so the reported
  // inliers are consistent with the returned line.
  const auto hypo_inliers = inliers_of(points, *best_line, cfg.inlier_threshold);
  std::vector<Eigen::Vector2d> support;
  support.reserve(hypo_inliers.size());
  for (const std::size_t idx : hypo_inliers) {
    support.push_back(points[idx]);
  }
  geometry::NormalLine refined = *best_line;
  if (const auto tls = geometry::fit_line_tls(support)) {
    refined = *tls;
  }
  auto final_inliers = inliers_of(points, refined, cfg.inlier_threshold);
  if (final_inliers.size() < static_cast<std::size_t>(cfg.min_inliers)) {
    return std::nullopt;
  }
  return LineFit{refined, std::move(final_inliers)};
}

std::optional<LineFit> ransac_fit_line(std::span<const Eigen::Vector2d> points,
                                       const DetectorConfig& cfg) {
  std::mt19937_64 rng(cfg.rng_seed);
  return ransac_fit_line(points, cfg, rng);
}

std::vector<ClusterLine> seq_line_fitting(const std::vector<Cluster>& clusters,
                                          const DetectorConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  std::vector<ClusterLine> lines;
  for (const Cluster& cluster : clusters) {
    std::vector<Eigen::Vector2d> remaining = cluster.points;
    std::vector<std::size_t> remaining_rows(cluster.points.size());
    for (std::size_t i = 0; i < remaining_rows.size(); ++i) {
      remaining_rows[i] = cluster.row_begin + i;
    }
    int extracted = 0;
    while (static_cast<int>(remaining.size()) >= cfg.min_cluster_size &&
           extracted < cfg.max_lines_per_cluster) {
      const auto fit = ransac_fit_line(remaining, cfg, rng);
      if (!fit) {
        break;
      }
      ClusterLine out;
      out.line = fit->line;
      for (const std::size_t idx : fit->inliers) {
        out.row_indices.push_back(remaining_rows[idx]);
        out.points.push_back(remaining[idx]);
      }
      lines.push_back(std::move(out));
      ++extracted;

      std::vector<Eigen::Vector2d> kept;
      std::vector<std::size_t> kept_rows;
      kept.reserve(remaining.size() - fit->inliers.size());
      kept_rows.reserve(kept.capacity());
      std::size_t next_inlier = 0;
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        if (next_inlier < fit->inliers.size() && fit->inliers[next_inlier] == i) {
          ++next_inlier;
          continue;
        }
        kept.push_back(remaining[i]);
        kept_rows.push_back(remaining_rows[i]);
      }
      remaining = std::move(kept);
      remaining_rows = std::move(kept_rows);
    }
  }
  std::sort(lines.begin(), lines.end(), [](const ClusterLine& a, const ClusterLine& b) {
    return a.row_indices.front() < b.row_indices.front();
  });
  return lines;
}

std::vector<ClusterLine> seq_line_fitting(const std::vector<Cluster>& clusters,
                                          const DetectorConfig& cfg) {
  std::mt19937_64 rng(cfg.rng_seed);
  return seq_line_fitting(clusters, cfg, rng);
}

std::vector<Observation> detect_walls(const ScanRow& row, const DetectorConfig& cfg) {
  const auto runs = cluster_by_invalid(row, cfg.min_cluster_size);
  const auto clusters = split_on_gaps(runs, cfg.max_point_gap, cfg.min_cluster_size);
  std::mt19937_64 rng(cfg.rng_seed);
  const auto lines = seq_line_fitting(clusters, cfg, rng);

  std::vector<Observation> observations;
  observations.reserve(lines.size());
  for (const ClusterLine& cl : lines) {
    const auto wall = make_wall_param(cl.line.closest_point());
    if (!wall) {
      continue;  // through-origin line, unrepresentable as (u, v)
    }
    // Extent: projections of the extreme inliers onto the line.
    const Eigen::Vector2d dir = cl.line.direction();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& p : cl.points) {
      const double s = dir.dot(p);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    const Eigen::Vector2d anchor = cl.line.closest_point();
    Observation::Extent extent{anchor + lo * dir, anchor + hi * dir};
    observations.emplace_back(*wall, static_cast<int>(cl.row_indices.size()), extent);
  }
  return observations;
}

}  // namespace wallmap
