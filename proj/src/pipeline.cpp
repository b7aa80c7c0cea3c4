#include "wallmap/pipeline.hpp"

#include <chrono>

namespace wallmap {

void PipelineConfig::validate() const {
  detector.validate();
  mapper.validate();
  association.validate();
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(const Clock::time_point& start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

FrameMetrics process_frame(WallMap& map, const Pose2D& pose, const ScanRow& row,
                           const PipelineConfig& cfg, std::int64_t frame_index) {
  FrameMetrics metrics;
  metrics.frame = frame_index;

  auto t0 = Clock::now();
  const std::vector<Observation> observations = detect_walls(row, cfg.detector);
  if (cfg.capture_timings) {
    metrics.t_detect = seconds_since(t0);
  }
  metrics.n_observations = static_cast<int>(observations.size());

  t0 = Clock::now();
  const AssociationResult assoc =
      associate(observations, map, pose, cfg.association, cfg.mapper);
  if (cfg.capture_timings) {
    metrics.t_associate = seconds_since(t0);
  }

  t0 = Clock::now();
  // Stage all changes so a numerical failure leaves the map untouched.
  std::vector<Landmark> updated;
  std::vector<Landmark> fresh;
  try {
    for (std::size_t i = 0; i < observations.size(); ++i) {
      const Association& match = assoc.matches[i];
      if (match.landmark_id) {
        const Landmark* lm = map.find(*match.landmark_id);
        updated.push_back(ekf_update(*lm, observations[i], pose, cfg.mapper, frame_index));
      } else {
        try {
          fresh.push_back(init_landmark(observations[i], pose, cfg.mapper, frame_index));
        } catch (const NumericalError&) {
          // Observation maps onto the world origin; unrepresentable as a
          // landmark, dropped.
        }
      }
    }
  } catch (const NumericalError& err) {
    metrics.error = err.what();
    metrics.n_landmarks = static_cast<int>(map.size());
    if (cfg.capture_timings) {
      metrics.t_update = seconds_since(t0);
    }
    return metrics;
  }
  for (const Landmark& lm : updated) {
    map.replace(lm);
  }
  for (Landmark& lm : fresh) {
    map.add(std::move(lm));
  }
  if (cfg.capture_timings) {
    metrics.t_update = seconds_since(t0);
  }
  metrics.n_landmarks = static_cast<int>(map.size());
  return metrics;
}

RunResult run_replay(std::span<const ReplayRecord> records, const PipelineConfig& cfg) {
  cfg.validate();
  RunResult result;
  result.metrics.reserve(records.size());
  result.trajectory.reserve(records.size());
  std::int64_t frame = 0;
  for (const ReplayRecord& rec : records) {
    result.metrics.push_back(process_frame(result.map, rec.pose, rec.scan, cfg, frame));
    result.trajectory.push_back(rec.pose);
    ++frame;
  }
  return result;
}

}  // namespace wallmap
