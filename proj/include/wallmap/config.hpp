#pragma once

#include "wallmap/pipeline.hpp"
#include "wallmap/simulator.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <stdexcept>

namespace wallmap {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strict parsing: unknown or mistyped keys are rejected by full dotted
/// name. Accepted document:
/// {
///   "sensor_model": "paper" | "hessian",
///   "kappa_init": 2.0,
///   "noise": {"sigma": 0.05} or {"cov": [s_uu, s_uv, s_vv]},
///   "detector": {"ransac_iterations", "inlier_threshold", "min_inliers",
///                "min_cluster_size", "max_lines_per_cluster", "rng_seed"},
///   "association": {"gate", "use_innovation_cov"}
/// }
/// Every key is optional; omitted keys keep their defaults.
PipelineConfig pipeline_config_from_json(const nlohmann::json& doc);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
nlohmann::json to_json(const PipelineConfig& cfg);

/// Scenario document: either {"scenario": "square_room"} referencing a
/// built-in, or an inline description:
/// {
///   "name": "...", "walls": [[ax, ay, bx, by], ...],
///   "waypoints": [[x, y] or [x, y, theta], ...],
///   "step": 0.06, "turn_step": 0.15,
///   "sensor": {"fov", "samples", "max_range", "sigma", "dropout", "rng_seed"}
/// }
sim::Scenario scenario_from_json(const nlohmann::json& doc);
sim::Scenario load_scenario(const std::filesystem::path& path);

}  // namespace wallmap
