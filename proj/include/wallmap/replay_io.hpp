#pragma once

#include "wallmap/core_types.hpp"
#include "wallmap/frame_metrics.hpp"
#include "wallmap/mapper.hpp"
#include "wallmap/simulator.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wallmap {

/// One replay frame: timestamp, pose and the scan row taken there.
struct ReplayRecord {
  double t = 0.0;  // seconds, monotone non-decreasing within a file
  Pose2D pose;
  ScanRow scan;
};

class ReplayFormatError : public std::runtime_error {
 public:
  ReplayFormatError(const std::string& message, std::size_t line_number);
  std::size_t line_number() const { return line_; }

 private:
  std::size_t line_ = 0;
};

/// Shortest text form that parses back to the identical double; integral
/// values keep a trailing ".0" so the column stays visibly floating-point.
std::string format_double(double value);

/// Locale-independent strict parse of a full token; nullopt on any junk.
std::optional<double> parse_double(std::string_view token);

// Replay format, one record per line:
//   t pose_x pose_y pose_theta | s1x s1y s2x s2y ...
// with the literal token pair "nan nan" for invalid samples. Scan width must
// be constant across the file and timestamps monotone non-decreasing.
void write_replay(std::span<const ReplayRecord> records, const std::filesystem::path& path);
std::vector<ReplayRecord> read_replay(const std::filesystem::path& path);

/// Streaming reader; throws ReplayFormatError with the 1-based line number
/// on malformed input.
class ReplayReader {
 public:
  explicit ReplayReader(const std::filesystem::path& path);
  std::optional<ReplayRecord> next();

 private:
  std::ifstream in_;
  std::filesystem::path path_;
  std::size_t line_ = 0;
  std::optional<std::size_t> width_;
  std::optional<double> last_t_;
};

// Map CSV: header `id,u,v,s_uu,s_uv,s_vv,hits`, world frame, one landmark
// per row, byte-stable for identical inputs.
void export_map_csv(const WallMap& map, const std::filesystem::path& path);
WallMap import_map_csv(const std::filesystem::path& path);

// Metrics CSV: header `frame,t_detect_s,t_assoc_s,t_update_s,n_obs,n_landmarks`.
void export_metrics_csv(std::span<const FrameMetrics> metrics,
                        const std::filesystem::path& path);

struct SvgOptions {
  const sim::Environment* env = nullptr;          // drawn as a reference path
  std::span<const Pose2D> trajectory = {};        // drawn as one polyline
  double margin = 1.0;                            // meters around the content
};

/// Plot of the inferred wall configuration: one `<line>` element per
/// landmark (the infinite line clipped to the viewport), one `<polyline>`
/// for the trajectory, environment segments as a `<path>`.
void export_map_svg(const WallMap& map, const std::filesystem::path& path,
                    const SvgOptions& options = {});

}  // namespace wallmap
