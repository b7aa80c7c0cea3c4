#include "wallmap/replay_io.hpp"

#include "wallmap/simulator.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <unistd.h>

using namespace wallmap;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("wallmap_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
  fs::path file(const std::string& name) const { return path / name; }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

std::vector<ReplayRecord> sample_records(int frames, double sigma) {
  const sim::Scenario sc = sim::make_scenario("corner");
  sim::SensorSpec spec = sc.sensor;
  spec.sigma = sigma;
  spec.samples = 64;
  std::mt19937_64 rng(5);
  const auto poses = sim::generate_trajectory(sc.waypoints, sc.step, sc.turn_step);
  std::vector<ReplayRecord> records;
  for (int i = 0; i < frames && i < static_cast<int>(poses.size()); ++i) {
    ReplayRecord rec;
    rec.t = 0.1 * i;
    rec.pose = poses[static_cast<std::size_t>(i)];
    rec.scan = sim::corrupt(sim::raycast_row(sc.env, rec.pose, spec), spec, rng);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace

TEST_CASE("format_double") {
  CHECK(format_double(2.0) == "2.0");
  CHECK(format_double(0.0) == "0.0");
  CHECK(format_double(0.01) == "0.01");
  CHECK(format_double(-3.5) == "-3.5");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");

  CHECK(parse_double("2.0") == 2.0);
  CHECK(parse_double("1e-3") == 1e-3);
  CHECK(!parse_double("1.2.3").has_value());
  CHECK(!parse_double("abc").has_value());
  CHECK(!parse_double("").has_value());
  CHECK(std::isnan(*parse_double("nan")));

  SUBCASE("round-trips are bit-exact for finite doubles") {
    auto rng = test::make_rng(71);
    for (int i = 0; i < 5000; ++i) {
      double v = test::uniform(rng, -1e6, 1e6);
      if (i % 3 == 0) {
        v *= 1e-12;
      }
      if (i % 7 == 0) {
        v = std::ldexp(test::uniform(rng, -1.0, 1.0), static_cast<int>(test::uniform(rng, -60, 60)));
      }
      const auto back = parse_double(format_double(v));
      REQUIRE(back.has_value());
      CHECK(*back == v);  // exact, not approximate
    }
  }
}

TEST_CASE("replay write/read round-trip is the identity") {
  TempDir dir;
  const auto records = sample_records(20, 0.01);
  const fs::path path = dir.file("replay.txt");
  write_replay(records, path);
  const auto back = read_replay(path);

  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i].t == records[i].t);
    CHECK(back[i].pose.x() == records[i].pose.x());
    CHECK(back[i].pose.y() == records[i].pose.y());
    CHECK(back[i].pose.theta() == records[i].pose.theta());
    REQUIRE(back[i].scan.width() == records[i].scan.width());
    for (std::size_t k = 0; k < back[i].scan.width(); ++k) {
      CHECK(back[i].scan.valid(k) == records[i].scan.valid(k));
      if (back[i].scan.valid(k)) {
        CHECK(back[i].scan[k] == records[i].scan[k]);
      }
    }
  }

  // byte-stable output
  const fs::path again = dir.file("replay2.txt");
  write_replay(records, again);
  CHECK(slurp(path) == slurp(again));
}

TEST_CASE("replay reader errors carry the line number") {
  TempDir dir;

  SUBCASE("empty file yields an empty stream") {
    const fs::path path = dir.file("empty.txt");
    std::ofstream(path).close();
    CHECK(read_replay(path).empty());
  }

  SUBCASE("width change is fatal and names the line") {
    const fs::path path = dir.file("width.txt");
    {
      std::ofstream out(path);
      out << "0.0 0.0 0.0 0.0 | 1.0 2.0 3.0 4.0\n";
      out << "0.1 0.0 0.0 0.0 | 1.0 2.0\n";
    }
    try {
      read_replay(path);
      FAIL("expected ReplayFormatError");
    } catch (const ReplayFormatError& err) {
      CHECK(err.line_number() == 2);
      CHECK(std::string(err.what()).find("line 2") != std::string::npos);
    }
  }

  SUBCASE("non-monotone timestamps are fatal") {
    const fs::path path = dir.file("time.txt");
    {
      std::ofstream out(path);
      out << "1.0 0.0 0.0 0.0 | 1.0 2.0\n";
      out << "0.5 0.0 0.0 0.0 | 1.0 2.0\n";
    }
    CHECK_THROWS_AS(read_replay(path), ReplayFormatError);
  }

  SUBCASE("garbage tokens are fatal") {
    const fs::path path = dir.file("garbage.txt");
    {
      std::ofstream out(path);
      out << "0.0 0.0 zero 0.0 | 1.0 2.0\n";
    }
    CHECK_THROWS_AS(read_replay(path), ReplayFormatError);
  }

  SUBCASE("missing separator is fatal") {
    const fs::path path = dir.file("sep.txt");
    {
      std::ofstream out(path);
      out << "0.0 0.0 0.0 0.0 1.0 2.0\n";
    }
    CHECK_THROWS_AS(read_replay(path), ReplayFormatError);
  }

  SUBCASE("a record without samples is fatal") {
    const fs::path path = dir.file("zero_width.txt");
    {
      std::ofstream out(path);
      out << "0.0 0.0 0.0 0.0 |\n";
    }
    CHECK_THROWS_AS(read_replay(path), ReplayFormatError);
  }

  SUBCASE("nan sentinels parse as invalid samples") {
    const fs::path path = dir.file("nan.txt");
    {
      std::ofstream out(path);
      out << "0.0 0.0 0.0 0.0 | nan nan 2.0 0.5\n";
    }
    const auto records = read_replay(path);
    REQUIRE(records.size() == 1);
    REQUIRE(records[0].scan.width() == 2);
    CHECK(!records[0].scan.valid(0));
    CHECK(records[0].scan.valid(1));
  }
}

TEST_CASE("map CSV export") {
  TempDir dir;

  SUBCASE("format definition example") {
    WallMap map;
    map.add(Landmark(0, WallParam(2.0, 0.0), Cov2::diagonal(0.01, 0.01), 5, 0, 0));
    const fs::path path = dir.file("map.csv");
    export_map_csv(map, path);
    CHECK(slurp(path) == "id,u,v,s_uu,s_uv,s_vv,hits\n1,2.0,0.0,0.01,0.0,0.01,5\n");
  }

  SUBCASE("empty map keeps the header only") {
    const fs::path path = dir.file("empty.csv");
    export_map_csv(WallMap{}, path);
    CHECK(slurp(path) == "id,u,v,s_uu,s_uv,s_vv,hits\n");
  }

  SUBCASE("import inverts export") {
    WallMap map;
    map.add(Landmark(0, WallParam(2.0, -0.5), Cov2::diagonal(0.02, 0.03), 5, 0, 0));
    map.add(Landmark(0, WallParam(-1.0, 3.5), Cov2::isotropic(0.1), 9, 0, 0));
    const fs::path path = dir.file("roundtrip.csv");
    export_map_csv(map, path);
    const WallMap back = import_map_csv(path);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(back.landmarks()[i].id == map.landmarks()[i].id);
      CHECK(back.landmarks()[i].mean.vec() == map.landmarks()[i].mean.vec());
      CHECK(back.landmarks()[i].hits == map.landmarks()[i].hits);
      CHECK(back.landmarks()[i].cov.matrix() == map.landmarks()[i].cov.matrix());
    }
  }
}

TEST_CASE("metrics CSV export") {
  TempDir dir;
  std::vector<FrameMetrics> metrics(2);
  metrics[0].frame = 0;
  metrics[0].t_detect = 0.5;
  metrics[0].n_observations = 3;
  metrics[0].n_landmarks = 3;
  metrics[1].frame = 1;
  metrics[1].n_landmarks = 3;
  const fs::path path = dir.file("metrics.csv");
  export_metrics_csv(metrics, path);
  CHECK(slurp(path) ==
        "frame,t_detect_s,t_assoc_s,t_update_s,n_obs,n_landmarks\n"
        "0,0.5,0.0,0.0,3,3\n"
        "1,0.0,0.0,0.0,0,3\n");
}

TEST_CASE("SVG export structure") {
  TempDir dir;
  WallMap map;
  map.add(Landmark(0, WallParam(2.0, 0.0), Cov2::isotropic(0.05), 4, 0, 0));
  map.add(Landmark(0, WallParam(0.0, 3.0), Cov2::isotropic(0.05), 4, 0, 0));
  map.add(Landmark(0, WallParam(-1.5, 1.5), Cov2::isotropic(0.05), 4, 0, 0));

  const sim::Environment env({{{2.0, -3.0}, {2.0, 3.0}}});
  const std::vector<Pose2D> trajectory = {Pose2D(0, 0, 0), Pose2D(0.5, 0, 0),
                                          Pose2D(1.0, 0.2, 0.1)};
  SvgOptions opts;
  opts.env = &env;
  opts.trajectory = trajectory;

  const fs::path path = dir.file("map.svg");
  export_map_svg(map, path, opts);
  const std::string svg = slurp(path);

  CHECK(count_occurrences(svg, "<line ") == map.size());
  CHECK(count_occurrences(svg, "<polyline ") == 1);
  CHECK(count_occurrences(svg, "<path ") == 1);
  CHECK(svg.find("<svg xmlns") == 0);

  const fs::path again = dir.file("map2.svg");
  export_map_svg(map, again, opts);
  CHECK(slurp(again) == svg);

  // empty map still yields a valid document with no landmark lines
  const fs::path empty = dir.file("empty.svg");
  export_map_svg(WallMap{}, empty, SvgOptions{});
  CHECK(count_occurrences(slurp(empty), "<line ") == 0);
}
