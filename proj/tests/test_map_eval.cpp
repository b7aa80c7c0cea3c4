#include "wallmap/map_eval.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace wallmap;

namespace {

WallMap map_of(const std::vector<WallParam>& walls) {
  WallMap map;
  for (const WallParam& w : walls) {
    map.add(Landmark(0, w, Cov2::isotropic(0.05), 3, 0, 0));
  }
  return map;
}

}  // namespace

TEST_CASE("evaluate_map") {
  const std::vector<WallParam> truth = {WallParam(2, 0), WallParam(0, 2), WallParam(-2, 0),
                                        WallParam(0, -2)};

  SUBCASE("map equal to truth: perfect score") {
    const EvalReport report = evaluate_map(map_of(truth), truth, 0.5);
    CHECK(report.precision == 1.0);
    CHECK(report.recall == 1.0);
    CHECK(report.rmse == 0.0);
    CHECK(report.mean_error == 0.0);
    CHECK(report.matches.size() == 4);
  }

  SUBCASE("one spurious landmark: precision N/(N+1)") {
    std::vector<WallParam> walls = truth;
    walls.emplace_back(5.0, 5.0);
    const EvalReport report = evaluate_map(map_of(walls), truth, 0.5);
    CHECK(report.precision == doctest::Approx(4.0 / 5.0));
    CHECK(report.recall == 1.0);
  }

  SUBCASE("one missed wall: recall (N-1)/N") {
    const std::vector<WallParam> walls = {truth[0], truth[1], truth[2]};
    const EvalReport report = evaluate_map(map_of(walls), truth, 0.5);
    CHECK(report.precision == 1.0);
    CHECK(report.recall == doctest::Approx(3.0 / 4.0));
  }

  SUBCASE("uniform perturbation by 0.03 with gate 0.1 gives RMSE ~ 0.03") {
    // constructed fixture: every estimate exactly 0.03 m from its wall
    auto rng = test::make_rng(81);
    std::vector<WallParam> walls;
    for (const WallParam& w : truth) {
      const double angle = test::uniform(rng, -3.14, 3.14);
      walls.push_back(
          WallParam(w.vec() + 0.03 * Eigen::Vector2d(std::cos(angle), std::sin(angle))));
    }
    const EvalReport report = evaluate_map(map_of(walls), truth, 0.1);
    CHECK(report.recall == 1.0);
    CHECK(report.rmse == doctest::Approx(0.03).epsilon(1e-9));
    CHECK(report.mean_error == doctest::Approx(0.03).epsilon(1e-9));
    CHECK(report.max_error == doctest::Approx(0.03).epsilon(1e-9));
  }

  SUBCASE("estimates beyond the gate stay unmatched") {
    const std::vector<WallParam> walls = {WallParam(2.2, 0)};  // 0.2 from (2, 0)
    const EvalReport report = evaluate_map(map_of(walls), truth, 0.1);
    CHECK(report.matches.empty());
    CHECK(report.precision == 0.0);
    CHECK(report.recall == 0.0);
  }

  SUBCASE("empty map against empty truth is perfect") {
    const EvalReport report = evaluate_map(WallMap{}, {}, 0.5);
    CHECK(report.precision == 1.0);
    CHECK(report.recall == 1.0);
  }

  SUBCASE("greedy matching is one-to-one") {
    // two estimates near one wall: only one may match it
    const std::vector<WallParam> walls = {WallParam(2.01, 0), WallParam(1.99, 0)};
    const EvalReport report = evaluate_map(map_of(walls), {WallParam(2, 0)}, 0.5);
    CHECK(report.matches.size() == 1);
    CHECK(report.precision == doctest::Approx(0.5));
    CHECK(report.recall == 1.0);
  }
}
