#include "wallmap/wall_detector.hpp"

#include "wallmap/simulator.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace wallmap;

namespace {

const Eigen::Vector2d kNanPoint = ScanRow::invalid_sample();

DetectorConfig small_cfg() {
  DetectorConfig cfg;
  cfg.ransac_iterations = 100;
  cfg.inlier_threshold = 0.02;
  cfg.min_inliers = 2;
  cfg.min_cluster_size = 2;
  cfg.rng_seed = 99;
  return cfg;
}

/// Config for noiseless fixtures: a tight threshold separates exact
/// structures without contaminating neighbours.
DetectorConfig noiseless_cfg() {
  DetectorConfig cfg;
  cfg.inlier_threshold = 1e-6;
  cfg.min_inliers = 15;
  cfg.min_cluster_size = 15;
  cfg.rng_seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("cluster_by_invalid splits at sentinels and filters short runs") {
  const Eigen::Vector2d p1(1, 1), p2(2, 1), p3(3, 1), p4(4, 1);

  SUBCASE("paper trace, min size 1") {
    const ScanRow row(std::vector<Eigen::Vector2d>{p1, p2, kNanPoint, p3});
    const auto clusters = cluster_by_invalid(row, 1);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].points.size() == 2);
    CHECK(clusters[0].row_begin == 0);
    CHECK(clusters[1].points.size() == 1);
    CHECK(clusters[1].row_begin == 3);
    CHECK(clusters[1].points[0] == p3);
  }

  SUBCASE("all-invalid row") {
    const ScanRow row(std::vector<Eigen::Vector2d>(6, kNanPoint));
    CHECK(cluster_by_invalid(row, 1).empty());
  }

  SUBCASE("empty row") {
    CHECK(cluster_by_invalid(ScanRow{}, 1).empty());
  }

  SUBCASE("size filter drops the singleton") {
    const ScanRow row(
        std::vector<Eigen::Vector2d>{kNanPoint, p1, p2, p3, kNanPoint, kNanPoint, p4});
    const auto clusters = cluster_by_invalid(row, 2);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].points.size() == 3);
    CHECK(clusters[0].row_begin == 1);
  }

  SUBCASE("concatenation preserves the finite subsequence") {
    auto rng = test::make_rng(41);
    std::vector<Eigen::Vector2d> samples;
    std::vector<Eigen::Vector2d> finite;
    for (int i = 0; i < 300; ++i) {
      if (test::uniform(rng, 0.0, 1.0) < 0.25) {
        samples.push_back(kNanPoint);
      } else {
        const Eigen::Vector2d p(test::uniform(rng, -5, 5), test::uniform(rng, -5, 5));
        samples.push_back(p);
        finite.push_back(p);
      }
    }
    const auto clusters = cluster_by_invalid(ScanRow(samples), 1);
    std::vector<Eigen::Vector2d> rebuilt;
    for (const auto& c : clusters) {
      rebuilt.insert(rebuilt.end(), c.points.begin(), c.points.end());
    }
    REQUIRE(rebuilt.size() == finite.size());
    for (std::size_t i = 0; i < finite.size(); ++i) {
      CHECK(rebuilt[i] == finite[i]);
    }
  }
}

TEST_CASE("split_on_gaps breaks clusters at depth discontinuities") {
  std::vector<Eigen::Vector2d> pts;
  for (int i = 0; i < 5; ++i) {
    pts.emplace_back(1.0 + 0.01 * i, 0.0);  // near group
  }
  for (int i = 0; i < 4; ++i) {
    pts.emplace_back(2.0 + 0.01 * i, 0.0);  // far group, 0.96 jump
  }
  const std::vector<Cluster> split = split_on_gaps({Cluster{3, pts}}, 0.5, 1);
  REQUIRE(split.size() == 2);
  CHECK(split[0].points.size() == 5);
  CHECK(split[0].row_begin == 3);
  CHECK(split[1].points.size() == 4);
  CHECK(split[1].row_begin == 8);

  // the size filter applies to the fragments
  const std::vector<Cluster> filtered = split_on_gaps({Cluster{3, pts}}, 0.5, 5);
  REQUIRE(filtered.size() == 1);
  CHECK(filtered[0].points.size() == 5);

  // no gap, no split
  CHECK(split_on_gaps({Cluster{0, pts}}, 2.0, 1).size() == 1);
  CHECK(split_on_gaps({}, 0.5, 1).empty());
}

TEST_CASE("ransac_fit_line on constructed fixtures") {
  SUBCASE("noiseless collinear points on v = 0u + 2") {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 50; ++i) {
      pts.emplace_back(-2.0 + 0.08 * i, 2.0);
    }
    DetectorConfig cfg = small_cfg();
    cfg.min_inliers = 10;
    cfg.min_cluster_size = 10;
    const auto fit = ransac_fit_line(pts, cfg);
    REQUIRE(fit.has_value());
    CHECK(fit->inliers.size() == 50);
    CHECK((fit->line.closest_point() - Eigen::Vector2d(0, 2)).norm() < 1e-9);
    const auto mc = geometry::mc_from_normal_line(fit->line);
    REQUIRE(mc.has_value());
    CHECK(mc->m == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mc->c == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("outliers beyond the threshold are excluded") {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 50; ++i) {
      pts.emplace_back(-2.0 + 0.08 * i, 2.0);
    }
    auto rng = test::make_rng(42);
    for (int i = 0; i < 10; ++i) {
      // at least 5 thresholds away from the structure line
      pts.emplace_back(test::uniform(rng, -2.0, 2.0),
                       2.0 + (i % 2 == 0 ? 1.0 : -1.0) * test::uniform(rng, 0.2, 1.5));
    }
    DetectorConfig cfg = small_cfg();
    cfg.min_inliers = 40;
    cfg.min_cluster_size = 40;
    const auto fit = ransac_fit_line(pts, cfg);
    REQUIRE(fit.has_value());
    CHECK(fit->inliers.size() >= 50);
    CHECK((fit->line.closest_point() - Eigen::Vector2d(0, 2)).norm() < 1e-9);
    for (const std::size_t idx : fit->inliers) {
      CHECK(idx < 50);  // no outlier admitted
    }
  }

  SUBCASE("below the inlier floor yields no fit") {
    std::vector<Eigen::Vector2d> pts = {{0, 1}, {1, 1}, {2, 1}};
    DetectorConfig cfg = small_cfg();
    cfg.min_inliers = 10;
    cfg.min_cluster_size = 10;
    CHECK(!ransac_fit_line(pts, cfg).has_value());
  }

  SUBCASE("inliers lie within the threshold of the returned line") {
    auto rng = test::make_rng(43);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Eigen::Vector2d> pts;
      const double m = test::uniform(rng, -2, 2);
      const double c = test::uniform(rng, 0.5, 4);
      for (int i = 0; i < 60; ++i) {
        const double x = test::uniform(rng, -3, 3);
        pts.emplace_back(x, m * x + c + test::uniform(rng, -0.015, 0.015));
      }
      const auto fit = ransac_fit_line(pts, small_cfg());
      REQUIRE(fit.has_value());
      for (const std::size_t idx : fit->inliers) {
        CHECK(fit->line.distance_to(pts[idx]) <= small_cfg().inlier_threshold);
      }
    }
  }
}

TEST_CASE("seq_line_fitting separates structures inside one cluster") {
  SUBCASE("clean corner: two perpendicular segments") {
    // walls x = 2 (40 pts) then y = 2 (40 pts), one contiguous cluster
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 40; ++i) {
      pts.emplace_back(2.0, -2.0 + 0.1 * i);
    }
    for (int i = 0; i < 40; ++i) {
      pts.emplace_back(2.0 - 0.1 * i, 2.0);
    }
    Cluster cluster{0, pts};
    DetectorConfig cfg = noiseless_cfg();
    const auto lines = seq_line_fitting({cluster}, cfg);
    REQUIRE(lines.size() == 2);
    std::set<double> distances;
    for (const auto& l : lines) {
      CHECK(std::abs(l.line.closest_point().norm() - 2.0) < 1e-6);
      distances.insert(std::round(l.line.n.x() * 10.0));
    }
    CHECK(distances.size() == 2);  // two distinct orientations
  }

  SUBCASE("single collinear cluster gives exactly one line") {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i < 50; ++i) {
      pts.emplace_back(0.05 * i, 1.5);
    }
    const auto lines = seq_line_fitting({Cluster{0, pts}}, noiseless_cfg());
    CHECK(lines.size() == 1);
  }

  SUBCASE("scattered points give nothing") {
    std::vector<Eigen::Vector2d> pts = {{0, 1}, {3, -2}, {1, 4}, {-2, 2}, {2, 2}};
    DetectorConfig cfg = small_cfg();
    cfg.min_inliers = 10;
    cfg.min_cluster_size = 10;
    CHECK(seq_line_fitting({Cluster{0, pts}}, cfg).empty());
  }

  SUBCASE("inlier row-index sets are pairwise disjoint") {
    std::vector<Eigen::Vector2d> pts;
    auto rng = test::make_rng(44);
    for (int i = 0; i < 40; ++i) {
      pts.emplace_back(2.0 + test::uniform(rng, -0.01, 0.01), -2.0 + 0.1 * i);
    }
    for (int i = 0; i < 40; ++i) {
      pts.emplace_back(2.0 - 0.1 * i, 2.0 + test::uniform(rng, -0.01, 0.01));
    }
    DetectorConfig cfg = small_cfg();
    cfg.min_inliers = 15;
    cfg.min_cluster_size = 15;
    const auto lines = seq_line_fitting({Cluster{7, pts}}, cfg);
    std::set<std::size_t> seen;
    for (const auto& l : lines) {
      for (const std::size_t idx : l.row_indices) {
        CHECK(!seen.contains(idx));
        seen.insert(idx);
        CHECK(idx >= 7);
        CHECK(idx < 7 + pts.size());
      }
    }
    CHECK(lines.size() >= 2);
  }
}

TEST_CASE("detect_walls against the simulator oracle") {
  SUBCASE("one frontal wall, noiseless") {
    const sim::Environment env({{{2.0, -5.0}, {2.0, 5.0}}});
    sim::SensorSpec spec;
    const Pose2D pose(0, 0, 0);
    const ScanRow row = sim::raycast_row(env, pose, spec);
    const auto gt = sim::ground_truth_observation(env, pose, spec, SensorModelKind::hessian);
    REQUIRE(gt.size() == 1);
    const auto obs = detect_walls(row, noiseless_cfg());
    REQUIRE(obs.size() == 1);
    CHECK((obs[0].wall.vec() - gt[0].vec()).norm() < 1e-6);
    CHECK((gt[0].vec() - Eigen::Vector2d(2, 0)).norm() < 1e-12);
    CHECK(obs[0].inliers >= noiseless_cfg().min_inliers);
    REQUIRE(obs[0].extent.has_value());
    // extent endpoints sit on the detected line
    CHECK(obs[0].extent->first.x() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(obs[0].extent->second.x() == doctest::Approx(2.0).epsilon(1e-9));
  }

  SUBCASE("corner view: both walls recovered within 1e-6") {
    const sim::Scenario sc = sim::make_scenario("corner");
    const Pose2D pose = sc.waypoints.front();
    const ScanRow row = sim::raycast_row(sc.env, pose, sc.sensor);
    const auto gt = sim::ground_truth_observation(sc.env, pose, sc.sensor,
                                                  SensorModelKind::hessian);
    REQUIRE(gt.size() == 2);
    const auto obs = detect_walls(row, noiseless_cfg());
    REQUIRE(obs.size() == 2);
    for (const auto& truth : gt) {
      double best = 1e9;
      for (const auto& o : obs) {
        best = std::min(best, (o.wall.vec() - truth.vec()).norm());
      }
      CHECK(best < 1e-6);
    }
  }

  SUBCASE("all-invalid row yields nothing") {
    const ScanRow row(std::vector<Eigen::Vector2d>(640, kNanPoint));
    CHECK(detect_walls(row, noiseless_cfg()).empty());
  }
}

TEST_CASE("detect_walls determinism is bit-exact") {
  const sim::Scenario sc = sim::make_scenario("corner");
  sim::SensorSpec spec = sc.sensor;
  spec.sigma = 0.01;
  const Pose2D pose = sc.waypoints.front();
  const ScanRow row = sim::corrupt(sim::raycast_row(sc.env, pose, spec), spec);

  DetectorConfig cfg;
  cfg.rng_seed = 1234;
  const auto a = detect_walls(row, cfg);
  const auto b = detect_walls(row, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].wall.u() == b[i].wall.u());
    CHECK(a[i].wall.v() == b[i].wall.v());
    CHECK(a[i].inliers == b[i].inliers);
  }
}

TEST_CASE("through-origin lines are dropped from the observation list") {
  // structure passing through the sensor origin: representable in normal
  // form but not as a closest-point parameter
  std::vector<Eigen::Vector2d> pts;
  for (int i = 0; i < 40; ++i) {
    const double s = -1.0 + 0.05 * i;
    pts.emplace_back(s, s);  // line v = u through the origin
  }
  DetectorConfig cfg = noiseless_cfg();
  const auto lines = seq_line_fitting({Cluster{0, pts}}, cfg);
  CHECK(lines.size() == 1);
  const ScanRow row(pts);
  CHECK(detect_walls(row, cfg).empty());
}
