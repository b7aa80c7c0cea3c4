#pragma once

#include "wallmap/core_types.hpp"
#include "wallmap/geometry.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace wallmap {

struct DetectorConfig {
  int ransac_iterations = 200;
  double inlier_threshold = 0.03;  // point-to-line distance, meters
  int min_inliers = 15;
  int min_cluster_size = 15;
  int max_lines_per_cluster = 4;
  /// Adjacent samples further apart than this break a cluster: a depth
  /// discontinuity means different surfaces even without invalid samples.
  double max_point_gap = 0.5;  // meters
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// Maximal run of finite samples from a ScanRow, order preserved.
/// row_begin is the index of points.front() in the source row.
struct Cluster {
  std::size_t row_begin = 0;
  std::vector<Eigen::Vector2d> points;
};

/// RANSAC result for one line: refined normal-form line plus the indices of
/// its inliers in the fitted point set (ascending).
struct LineFit {
  geometry::NormalLine line;
  std::vector<std::size_t> inliers;
};

/// One extracted line with its supporting samples; row_indices are positions
/// in the source ScanRow (ascending).
struct ClusterLine {
  geometry::NormalLine line;
  std::vector<std::size_t> row_indices;
  std::vector<Eigen::Vector2d> points;
};

/// Splits a row at invalid samples into maximal finite runs, discarding runs
/// shorter than min_cluster_size.
std::vector<Cluster> cluster_by_invalid(const ScanRow& row, int min_cluster_size);

/// Further splits clusters at depth discontinuities (adjacent points more
/// than max_gap apart), applying the same minimum-size filter.
std::vector<Cluster> split_on_gaps(const std::vector<Cluster>& clusters, double max_gap,
                                   int min_cluster_size);

/// Fits one line with RANSAC: 2-point hypotheses scored by truncated
/// quadratic consensus (MSAC), then a total-least-squares refinement over
/// the winner's inliers and one inlier recount against the refined line.
/// nullopt when the final inlier count < min_inliers.
std::optional<LineFit> ransac_fit_line(std::span<const Eigen::Vector2d> points,
                                       const DetectorConfig& cfg, std::mt19937_64& rng);
std::optional<LineFit> ransac_fit_line(std::span<const Eigen::Vector2d> points,
                                       const DetectorConfig& cfg);

/// Sequential RANSAC per cluster: fit, remove inliers, repeat until the
/// remainder is below min_cluster_size, the fit fails, or
/// max_lines_per_cluster is reached. Output sorted by first row index.
std::vector<ClusterLine> seq_line_fitting(const std::vector<Cluster>& clusters,
                                          const DetectorConfig& cfg, std::mt19937_64& rng);
std::vector<ClusterLine> seq_line_fitting(const std::vector<Cluster>& clusters,
                                          const DetectorConfig& cfg);

/// Full scanline detector: cluster at invalid samples and depth gaps,
/// sequential RANSAC, conversion to closest-point observations
/// (through-origin lines dropped). Deterministic for identical (row, cfg):
/// the RNG is seeded from cfg.rng_seed per call.
std::vector<Observation> detect_walls(const ScanRow& row, const DetectorConfig& cfg);

}  // namespace wallmap
