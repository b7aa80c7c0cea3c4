#pragma once

#include "wallmap/core_types.hpp"
#include "wallmap/mapper.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace wallmap {

/// Comparison of an estimated map against ground truth: greedy one-to-one
/// matching by ascending parameter distance |w_est - w_truth|, admissible
/// when the distance is within `gate` meters.
struct WallMatch {
  std::size_t truth_index;
  std::int64_t landmark_id;
  double error;  // meters
};

struct EvalReport {
  std::vector<WallMatch> matches;
  std::size_t n_truth = 0;
  std::size_t n_estimated = 0;
  double precision = 0.0;  // matched / estimated
  double recall = 0.0;     // matched / truth
  double rmse = 0.0;       // over matched pairs, meters
  double mean_error = 0.0;
  double max_error = 0.0;
};

EvalReport evaluate_map(const WallMap& map, const std::vector<WallParam>& truth, double gate);

}  // namespace wallmap
