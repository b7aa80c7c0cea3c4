// Command-line front end: simulate / map / eval / bench subcommands.

#include "wallmap/bench.hpp"
#include "wallmap/config.hpp"
#include "wallmap/map_eval.hpp"
#include "wallmap/pipeline.hpp"
#include "wallmap/simulator.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

namespace {

namespace fs = std::filesystem;
using namespace wallmap;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

PipelineConfig load_config_or_default(const std::string& path) {
  if (path.empty()) {
    return PipelineConfig{};
  }
  return load_pipeline_config(path);
}

int run_simulate(const CommonOpts& common, const std::string& scenario_name,
                 const std::string& scenario_file, const std::string& out_dir,
                 std::optional<double> sigma, std::optional<double> dropout,
                 std::optional<int> frames) {
  sim::Scenario scenario =
      scenario_file.empty() ? sim::make_scenario(scenario_name) : load_scenario(scenario_file);
  if (sigma) {
    scenario.sensor.sigma = *sigma;
  }
  if (dropout) {
    scenario.sensor.dropout = *dropout;
  }
  if (common.seed) {
    scenario.sensor.rng_seed = *common.seed;
  }
  scenario.sensor.validate();

  std::vector<Pose2D> poses =
      sim::generate_trajectory(scenario.waypoints, scenario.step, scenario.turn_step);
  if (frames && static_cast<int>(poses.size()) > *frames) {
    poses.resize(static_cast<std::size_t>(*frames));
  }

  std::mt19937_64 rng(scenario.sensor.rng_seed);
  std::vector<ReplayRecord> records;
  records.reserve(poses.size());
  double t = 0.0;
  for (const Pose2D& pose : poses) {
    ReplayRecord rec;
    rec.t = t;
    rec.pose = pose;
    rec.scan = sim::corrupt(sim::raycast_row(scenario.env, pose, scenario.sensor),
                            scenario.sensor, rng);
    records.push_back(std::move(rec));
    t += 1.0 / 30.0;
  }

  fs::create_directories(out_dir);
  write_replay(records, fs::path(out_dir) / "replay.txt");

  WallMap truth;
  for (const WallParam& w : scenario.env.ground_truth_walls()) {
    truth.add(Landmark(0, w, Cov2{}, 1, 0, 0));
  }
  export_map_csv(truth, fs::path(out_dir) / "truth.csv");

  std::cout << "wrote " << records.size() << " frames to " << out_dir << "/replay.txt ("
            << scenario.env.walls().size() << " ground-truth walls)\n";
  return 0;
}

int run_map(const CommonOpts& common, const std::string& replay_path, const std::string& out_dir,
            const std::string& model_override, std::optional<double> gate, bool no_timings) {
  PipelineConfig cfg = load_config_or_default(common.config_path);
  if (!model_override.empty()) {
    const auto kind = sensor_model_from_string(model_override);
    if (!kind) {
      std::cerr << "error: --sensor-model must be 'paper' or 'hessian'\n";
      return 2;
    }
    cfg.mapper.model = *kind;
  }
  if (gate) {
    cfg.association.gate = *gate;
  }
  if (common.seed) {
    cfg.detector.rng_seed = *common.seed;
  }
  cfg.capture_timings = !no_timings;
  cfg.validate();

  const std::vector<ReplayRecord> records = read_replay(replay_path);
  const RunResult result = run_replay(records, cfg);

  fs::create_directories(out_dir);
  export_map_csv(result.map, fs::path(out_dir) / "map.csv");
  export_metrics_csv(result.metrics, fs::path(out_dir) / "metrics.csv");
  SvgOptions svg;
  svg.trajectory = result.trajectory;
  export_map_svg(result.map, fs::path(out_dir) / "map.svg", svg);

  std::size_t skipped = 0;
  for (const FrameMetrics& m : result.metrics) {
    if (!m.error.empty()) {
      ++skipped;
    }
  }
  std::cout << "processed " << records.size() << " frames -> " << result.map.size()
            << " landmarks (" << skipped << " skipped) in " << out_dir << "\n";
  return 0;
}

int run_eval(const std::string& map_path, const std::string& truth_path, double gate) {
  const WallMap estimated = import_map_csv(map_path);
  const WallMap truth_map = import_map_csv(truth_path);
  std::vector<WallParam> truth;
  truth.reserve(truth_map.size());
  for (const Landmark& lm : truth_map.landmarks()) {
    truth.push_back(lm.mean);
  }

  const EvalReport report = evaluate_map(estimated, truth, gate);
  std::cout << "walls_truth=" << report.n_truth << " walls_map=" << report.n_estimated
            << " matched=" << report.matches.size() << "\n"
            << "precision=" << format_double(report.precision)
            << " recall=" << format_double(report.recall) << "\n"
            << "rmse_m=" << format_double(report.rmse)
            << " mean_err_m=" << format_double(report.mean_error)
            << " max_err_m=" << format_double(report.max_error) << "\n";
  for (const WallMatch& m : report.matches) {
    const WallParam& t = truth[m.truth_index];
    std::cout << "wall truth=(" << format_double(t.u()) << "," << format_double(t.v())
              << ") landmark_id=" << m.landmark_id << " err_m=" << format_double(m.error)
              << "\n";
  }
  return 0;
}

int run_bench(const CommonOpts& common, const std::string& out_path) {
  PipelineConfig cfg = load_config_or_default(common.config_path);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot open '" << out_path << "'\n";
      return 2;
    }
    out = &file;
  }

  const sim::Scenario scenario = sim::make_scenario("square_room");
  const Pose2D pose(0.0, 0.0, 0.0);

  // Detector cost vs row width.
  *out << "bench=detector rows: width,median_s\n";
  for (const int width : {160, 320, 640, 1280}) {
    sim::SensorSpec spec = scenario.sensor;
    spec.samples = width;
    spec.sigma = 0.01;
    const ScanRow row = sim::corrupt(sim::raycast_row(scenario.env, pose, spec), spec);
    const double t = bench::median_seconds([&] { (void)detect_walls(row, cfg.detector); }, 5, 9);
    *out << width << "," << format_double(t) << "\n";
  }

  // Association cost vs landmark count.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-3.1, 3.1);
  std::uniform_real_distribution<double> radius(1.0, 30.0);
  auto synthetic_map = [&](int n) {
    WallMap map;
    for (int i = 0; i < n; ++i) {
      const double a = angle(rng);
      const Eigen::Vector2d w = radius(rng) * Eigen::Vector2d(std::cos(a), std::sin(a));
      map.add(Landmark(0, WallParam(w), Cov2::isotropic(0.1), 1, 0, 0));
    }
    return map;
  };
  std::vector<Observation> observations;
  for (int i = 0; i < 5; ++i) {
    observations.emplace_back(WallParam(2.0 + i, 1.0 + i), 20);
  }
  *out << "bench=association: n_landmarks,median_s\n";
  for (const int n : {1, 10, 100, 1000}) {
    const WallMap map = synthetic_map(n);
    const double t = bench::median_seconds(
        [&] { (void)associate(observations, map, pose, cfg.association, cfg.mapper); }, 20, 11);
    *out << n << "," << format_double(t) << "\n";
  }

  // EKF update cost vs landmark count (constant by construction: the update
  // touches a single landmark regardless of map size).
  *out << "bench=ekf_update: n_landmarks,median_s\n";
  const Observation z(WallParam(2.02, 0.01), 50);
  const Landmark probe(1, WallParam(2.0, 0.0), Cov2::isotropic(0.1), 1, 0, 0);
  for (const int n : {1, 25, 50, 75, 100}) {
    const WallMap map = synthetic_map(n);
    (void)map;
    const double t = bench::median_seconds(
        [&] { (void)ekf_update(probe, z, pose, cfg.mapper, 1); }, 200, 11);
    *out << n << "," << format_double(t) << "\n";
  }

  // End-to-end frame budget: 640-sample row, 20 landmarks.
  {
    sim::SensorSpec spec = scenario.sensor;
    spec.sigma = 0.01;
    const ScanRow row = sim::corrupt(sim::raycast_row(scenario.env, pose, spec), spec);
    std::vector<double> times;
    for (int i = 0; i < 200; ++i) {
      WallMap map = synthetic_map(20);
      const auto t0 = std::chrono::steady_clock::now();
      (void)process_frame(map, pose, row, cfg, i);
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    *out << "bench=process_frame: median_s=" << format_double(bench::median(times))
         << " p99_s=" << format_double(bench::percentile(times, 0.99)) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indoor wall-configuration mapping from pose + depth-scan replays"};
  app.require_subcommand(1);

  CommonOpts common;

  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic replay + ground truth");
  std::string scenario_name = "square_room";
  std::string scenario_file;
  std::string out_dir = "out";
  std::optional<double> sigma;
  std::optional<double> dropout;
  std::optional<int> frames;
  sim_cmd->add_option("--scenario", scenario_name, "Built-in scenario name")
      ->check(CLI::IsMember(sim::scenario_names()));
  sim_cmd->add_option("--scenario-file", scenario_file, "Scenario description JSON");
  sim_cmd->add_option("--out", out_dir, "Output directory");
  sim_cmd->add_option("--sigma", sigma, "Range noise at 1 m (overrides scenario)");
  sim_cmd->add_option("--dropout", dropout, "Sample dropout probability (overrides scenario)");
  sim_cmd->add_option("--frames", frames, "Truncate the trajectory to this many frames");
  sim_cmd->add_option("--seed", common.seed, "Simulation seed");

  auto* map_cmd = app.add_subcommand("map", "Run the mapping pipeline over a replay");
  std::string replay_path;
  std::string map_out = "out";
  std::string model_override;
  std::optional<double> gate;
  bool no_timings = false;
  map_cmd->add_option("replay", replay_path, "Replay file")->required();
  map_cmd->add_option("--config", common.config_path, "Pipeline configuration JSON");
  map_cmd->add_option("--out", map_out, "Output directory");
  map_cmd->add_option("--sensor-model", model_override, "paper | hessian");
  map_cmd->add_option("--gate", gate, "Association gate on squared Mahalanobis distance");
  map_cmd->add_option("--seed", common.seed, "Detector RNG seed");
  map_cmd->add_flag("--no-timings", no_timings,
                    "Zero the metrics timing columns for byte-reproducible output");

  auto* eval_cmd = app.add_subcommand("eval", "Score a map CSV against a ground-truth CSV");
  std::string eval_map;
  std::string eval_truth;
  double eval_gate = 0.5;
  eval_cmd->add_option("--map", eval_map, "Estimated map CSV")->required();
  eval_cmd->add_option("--truth", eval_truth, "Ground-truth map CSV")->required();
  eval_cmd->add_option("--gate", eval_gate, "Match gate in meters");

  auto* bench_cmd = app.add_subcommand("bench", "Scaling and latency measurements");
  std::string bench_out;
  bench_cmd->add_option("--config", common.config_path, "Pipeline configuration JSON");
  bench_cmd->add_option("--out", bench_out, "Write results to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim_cmd->parsed()) {
      return run_simulate(common, scenario_name, scenario_file, out_dir, sigma, dropout, frames);
    }
    if (map_cmd->parsed()) {
      return run_map(common, replay_path, map_out, model_override, gate, no_timings);
    }
    if (eval_cmd->parsed()) {
      return run_eval(eval_map, eval_truth, eval_gate);
    }
    if (bench_cmd->parsed()) {
      return run_bench(common, bench_out);
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
