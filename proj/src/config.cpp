#include "wallmap/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <string>

namespace wallmap {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail("cannot open configuration file '" + path.string() + "'");
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    fail("invalid JSON in '" + path.string() + "': " + err.what());
  }
  return doc;
}

/// Validating accessor that tracks consumed keys and reports unknown ones
/// with their full dotted path.
class Section {
 public:
  Section(const json& node, std::string prefix) : node_(node), prefix_(std::move(prefix)) {
    if (!node_.is_object()) {
      fail("configuration key '" + (prefix_.empty() ? "<root>" : prefix_) +
           "' must be an object");
    }
  }

  ~Section() = default;

  bool has(const std::string& key) {
    consumed_.insert(key);
    return node_.contains(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) {
      return fallback;
    }
    if (!node_[key].is_number()) {
      fail("configuration key '" + path(key) + "' must be a number");
    }
    return node_[key].get<double>();
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) {
      return fallback;
    }
    if (!node_[key].is_number_integer()) {
      fail("configuration key '" + path(key) + "' must be an integer");
    }
    return node_[key].get<int>();
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) {
      return fallback;
    }
    if (!node_[key].is_number_unsigned() && !node_[key].is_number_integer()) {
      fail("configuration key '" + path(key) + "' must be an integer");
    }
    return node_[key].get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) {
      return fallback;
    }
    if (!node_[key].is_boolean()) {
      fail("configuration key '" + path(key) + "' must be a boolean");
    }
    return node_[key].get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) {
      return fallback;
    }
    if (!node_[key].is_string()) {
      fail("configuration key '" + path(key) + "' must be a string");
    }
    return node_[key].get<std::string>();
  }

  const json* object(const std::string& key) {
    if (!has(key)) {
      return nullptr;
    }
    return &node_[key];
  }

  std::string path(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      (void)value;
      if (!consumed_.contains(key)) {
        fail("unknown configuration key '" + path(key) + "'");
      }
    }
  }

 private:
  const json& node_;
  std::string prefix_;
  std::set<std::string> consumed_;
};

MeasurementNoise noise_from(const json& node, const std::string& prefix) {
  Section sec(node, prefix);
  if (node.contains("sigma") && node.contains("cov")) {
    fail("configuration keys '" + prefix + ".sigma' and '" + prefix + ".cov' are exclusive");
  }
  if (sec.has("cov")) {
    sec.finish();
    const json& arr = node["cov"];
    if (!arr.is_array() || arr.size() != 3 || !arr[0].is_number() || !arr[1].is_number() ||
        !arr[2].is_number()) {
      fail("configuration key '" + prefix + ".cov' must be [s_uu, s_uv, s_vv]");
    }
    Eigen::Matrix2d m;
    m << arr[0].get<double>(), arr[1].get<double>(), arr[1].get<double>(), arr[2].get<double>();
    try {
      return MeasurementNoise(Cov2(m));
    } catch (const std::invalid_argument& err) {
      fail("configuration key '" + prefix + ".cov': " + std::string(err.what()));
    }
  }
  const double sigma = sec.number("sigma", 0.05);
  sec.finish();
  if (!(sigma > 0.0)) {
    fail("configuration key '" + prefix + ".sigma' must be > 0");
  }
  return MeasurementNoise::isotropic(sigma);
}

}  // namespace

PipelineConfig pipeline_config_from_json(const json& doc) {
  PipelineConfig cfg;
  Section root(doc, "");

  const std::string model = root.text("sensor_model", "paper");
  const auto kind = sensor_model_from_string(model);
  if (!kind) {
    fail("configuration key 'sensor_model' must be \"paper\" or \"hessian\", got \"" + model +
         "\"");
  }
  cfg.mapper.model = *kind;
  cfg.mapper.kappa_init = root.number("kappa_init", cfg.mapper.kappa_init);

  if (const json* node = root.object("noise")) {
    cfg.mapper.noise = noise_from(*node, "noise");
  }
  if (const json* node = root.object("detector")) {
    Section sec(*node, "detector");
    cfg.detector.ransac_iterations = sec.integer("ransac_iterations", cfg.detector.ransac_iterations);
    cfg.detector.inlier_threshold = sec.number("inlier_threshold", cfg.detector.inlier_threshold);
    cfg.detector.min_inliers = sec.integer("min_inliers", cfg.detector.min_inliers);
    cfg.detector.min_cluster_size = sec.integer("min_cluster_size", cfg.detector.min_cluster_size);
    cfg.detector.max_lines_per_cluster =
        sec.integer("max_lines_per_cluster", cfg.detector.max_lines_per_cluster);
    cfg.detector.max_point_gap = sec.number("max_point_gap", cfg.detector.max_point_gap);
    cfg.detector.rng_seed = sec.seed("rng_seed", cfg.detector.rng_seed);
    sec.finish();
  }
  if (const json* node = root.object("association")) {
    Section sec(*node, "association");
    cfg.association.gate = sec.number("gate", cfg.association.gate);
    cfg.association.use_innovation_cov =
        sec.boolean("use_innovation_cov", cfg.association.use_innovation_cov);
    sec.finish();
  }
  root.finish();
  try {
    cfg.validate();
  } catch (const std::invalid_argument& err) {
    fail(std::string("invalid configuration: ") + err.what());
  }
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  return pipeline_config_from_json(load_json(path));
}

nlohmann::json to_json(const PipelineConfig& cfg) {
  const Eigen::Matrix2d& r = cfg.mapper.noise.matrix();
  return json{
      {"sensor_model", std::string(to_string(cfg.mapper.model))},
      {"kappa_init", cfg.mapper.kappa_init},
      {"noise", {{"cov", {r(0, 0), r(0, 1), r(1, 1)}}}},
      {"detector",
       {{"ransac_iterations", cfg.detector.ransac_iterations},
        {"inlier_threshold", cfg.detector.inlier_threshold},
        {"min_inliers", cfg.detector.min_inliers},
        {"min_cluster_size", cfg.detector.min_cluster_size},
        {"max_lines_per_cluster", cfg.detector.max_lines_per_cluster},
        {"max_point_gap", cfg.detector.max_point_gap},
        {"rng_seed", cfg.detector.rng_seed}}},
      {"association",
       {{"gate", cfg.association.gate},
        {"use_innovation_cov", cfg.association.use_innovation_cov}}},
  };
}

sim::Scenario scenario_from_json(const json& doc) {
  Section root(doc, "");
  if (root.has("scenario")) {
    if (!doc["scenario"].is_string()) {
      fail("configuration key 'scenario' must be a string");
    }
    const std::string name = doc["scenario"].get<std::string>();
    root.finish();
    try {
      return sim::make_scenario(name);
    } catch (const std::invalid_argument& err) {
      fail(err.what());
    }
  }

  sim::Scenario sc;
  sc.name = root.text("name", "custom");
  if (root.has("walls")) {
    const json& walls = doc["walls"];
    if (!walls.is_array()) {
      fail("configuration key 'walls' must be an array of [ax, ay, bx, by]");
    }
    std::vector<sim::WallSegment> segments;
    for (const json& w : walls) {
      if (!w.is_array() || w.size() != 4) {
        fail("configuration key 'walls' entries must be [ax, ay, bx, by]");
      }
      segments.push_back({{w[0].get<double>(), w[1].get<double>()},
                          {w[2].get<double>(), w[3].get<double>()}});
    }
    try {
      sc.env = sim::Environment(std::move(segments));
    } catch (const std::invalid_argument& err) {
      fail(std::string("configuration key 'walls': ") + err.what());
    }
  }
  if (root.has("waypoints")) {
    const json& pts = doc["waypoints"];
    if (!pts.is_array() || pts.size() < 2) {
      fail("configuration key 'waypoints' must list at least 2 points");
    }
    sc.waypoints.clear();
    for (const json& p : pts) {
      if (!p.is_array() || p.size() < 2 || p.size() > 3) {
        fail("configuration key 'waypoints' entries must be [x, y] or [x, y, theta]");
      }
      const double theta = p.size() == 3 ? p[2].get<double>() : 0.0;
      sc.waypoints.emplace_back(p[0].get<double>(), p[1].get<double>(), theta);
    }
  }
  sc.step = root.number("step", sc.step);
  sc.turn_step = root.number("turn_step", sc.turn_step);
  if (const json* node = root.object("sensor")) {
    Section sec(*node, "sensor");
    sc.sensor.fov = sec.number("fov", sc.sensor.fov);
    sc.sensor.samples = sec.integer("samples", sc.sensor.samples);
    sc.sensor.max_range = sec.number("max_range", sc.sensor.max_range);
    sc.sensor.sigma = sec.number("sigma", sc.sensor.sigma);
    sc.sensor.dropout = sec.number("dropout", sc.sensor.dropout);
    sc.sensor.rng_seed = sec.seed("rng_seed", sc.sensor.rng_seed);
    sec.finish();
    try {
      sc.sensor.validate();
    } catch (const std::invalid_argument& err) {
      fail(std::string("invalid sensor specification: ") + err.what());
    }
  }
  root.finish();
  return sc;
}

sim::Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(load_json(path));
}

}  // namespace wallmap
