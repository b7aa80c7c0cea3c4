#pragma once

#include <cstdint>
#include <string>

namespace wallmap {

/// Per-frame pipeline accounting: stage wall-clock durations and counts.
struct FrameMetrics {
  std::int64_t frame = 0;
  double t_detect = 0.0;     // seconds
  double t_associate = 0.0;  // seconds
  double t_update = 0.0;     // seconds
  int n_observations = 0;
  int n_landmarks = 0;       // after the frame
  std::string error;         // empty on success; frame was skipped otherwise
};

}  // namespace wallmap
