#pragma once

#include "wallmap/data_association.hpp"
#include "wallmap/frame_metrics.hpp"
#include "wallmap/mapper.hpp"
#include "wallmap/replay_io.hpp"
#include "wallmap/wall_detector.hpp"

#include <span>
#include <vector>

namespace wallmap {

/// Everything one run needs: detector, noise/model, association, all
/// loadable from a single configuration document.
struct PipelineConfig {
  DetectorConfig detector;
  MapperConfig mapper;
  AssociationConfig association;
  /// When false the FrameMetrics durations are left at zero, making every
  /// output byte a pure function of (replay, config, seed).
  bool capture_timings = true;

  void validate() const;
};

/// One frame through detect -> associate -> update/initialize. Matched
/// observations refine their landmark, unmatched ones initialize new
/// landmarks (in observation order). On NumericalError from an update the
/// frame is skipped: the map is left untouched and the error recorded.
FrameMetrics process_frame(WallMap& map, const Pose2D& pose, const ScanRow& row,
                           const PipelineConfig& cfg, std::int64_t frame_index);

struct RunResult {
  WallMap map;
  std::vector<FrameMetrics> metrics;
  std::vector<Pose2D> trajectory;
};

/// Feeds every record through process_frame in order.
RunResult run_replay(std::span<const ReplayRecord> records, const PipelineConfig& cfg);

}  // namespace wallmap
