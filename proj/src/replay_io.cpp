#include "wallmap/replay_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace wallmap {

ReplayFormatError::ReplayFormatError(const std::string& message, std::size_t line_number)
    : std::runtime_error(message + " (line " + std::to_string(line_number) + ")"),
      line_(line_number) {}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) {
    s += ".0";
  }
  return s;
}

std::optional<double> parse_double(std::string_view token) {
  if (token.empty()) {
    return std::nullopt;
  }
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    return std::nullopt;
  }
  return value;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') {
      ++i;
    }
    if (i > start) {
      tokens.push_back(line.substr(start, i - start));
    }
  }
  return tokens;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  return out;
}

}  // namespace

void write_replay(std::span<const ReplayRecord> records, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (const ReplayRecord& rec : records) {
    out << format_double(rec.t) << ' ' << format_double(rec.pose.x()) << ' '
        << format_double(rec.pose.y()) << ' ' << format_double(rec.pose.theta()) << " |";
    for (const auto& p : rec.scan.samples()) {
      if (ScanRow::sample_valid(p)) {
        out << ' ' << format_double(p.x()) << ' ' << format_double(p.y());
      } else {
        out << " nan nan";
      }
    }
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

ReplayReader::ReplayReader(const std::filesystem::path& path) : in_(path), path_(path) {
  if (!in_) {
    throw std::runtime_error("cannot open replay '" + path.string() + "'");
  }
}

std::optional<ReplayRecord> ReplayReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto tokens = split_ws(line);
    if (tokens.size() < 5 || tokens[4] != "|") {
      throw ReplayFormatError("expected 't x y theta | ...'", line_);
    }
    double vals[4];
    for (int i = 0; i < 4; ++i) {
      const auto v = parse_double(tokens[static_cast<std::size_t>(i)]);
      if (!v || !std::isfinite(*v)) {
        throw ReplayFormatError("bad header field '" + std::string(tokens[i]) + "'", line_);
      }
      vals[i] = *v;
    }
    const std::size_t n_scan_tokens = tokens.size() - 5;
    if (n_scan_tokens % 2 != 0) {
      throw ReplayFormatError("odd number of scan coordinates", line_);
    }
    const std::size_t width = n_scan_tokens / 2;
    if (width == 0) {
      throw ReplayFormatError("empty scan row", line_);
    }
    if (width_ && width != *width_) {
      throw ReplayFormatError("scan width " + std::to_string(width) +
                                  " differs from established width " + std::to_string(*width_),
                              line_);
    }
    width_ = width;
    if (last_t_ && vals[0] < *last_t_) {
      throw ReplayFormatError("timestamp decreased", line_);
    }
    last_t_ = vals[0];

    std::vector<Eigen::Vector2d> samples;
    samples.reserve(width);
    for (std::size_t i = 5; i < tokens.size(); i += 2) {
      const auto x = parse_double(tokens[i]);
      const auto y = parse_double(tokens[i + 1]);
      if (!x || !y) {
        throw ReplayFormatError("bad scan coordinate '" + std::string(tokens[i]) + "'", line_);
      }
      samples.emplace_back(*x, *y);
    }
    ReplayRecord rec;
    rec.t = vals[0];
    rec.pose = Pose2D(vals[1], vals[2], vals[3]);
    rec.scan = ScanRow(std::move(samples));
    return rec;
  }
  return std::nullopt;
}

std::vector<ReplayRecord> read_replay(const std::filesystem::path& path) {
  ReplayReader reader(path);
  std::vector<ReplayRecord> records;
  while (auto rec = reader.next()) {
    records.push_back(std::move(*rec));
  }
  return records;
}

void export_map_csv(const WallMap& map, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "id,u,v,s_uu,s_uv,s_vv,hits\n";
  for (const Landmark& lm : map.landmarks()) {
    const Eigen::Matrix2d& c = lm.cov.matrix();
    out << lm.id << ',' << format_double(lm.mean.u()) << ',' << format_double(lm.mean.v())
        << ',' << format_double(c(0, 0)) << ',' << format_double(c(0, 1)) << ','
        << format_double(c(1, 1)) << ',' << lm.hits << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

WallMap import_map_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open map CSV '" + path.string() + "'");
  }
  WallMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line_no == 1) {
      continue;  // header
    }
    std::array<std::string, 7> fields;
    std::size_t field = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (field >= fields.size()) {
          throw ReplayFormatError("too many CSV fields", line_no);
        }
        fields[field++] = line.substr(start, i - start);
        start = i + 1;
      }
    }
    if (field != fields.size()) {
      throw ReplayFormatError("expected 7 CSV fields", line_no);
    }
    const auto u = parse_double(fields[1]);
    const auto v = parse_double(fields[2]);
    const auto suu = parse_double(fields[3]);
    const auto suv = parse_double(fields[4]);
    const auto svv = parse_double(fields[5]);
    if (!u || !v || !suu || !suv || !svv) {
      throw ReplayFormatError("bad CSV number", line_no);
    }
    Eigen::Matrix2d cov;
    cov << *suu, *suv, *suv, *svv;
    map.restore(Landmark(std::stoll(fields[0]), WallParam(*u, *v), Cov2(cov),
                         std::max(1, std::stoi(fields[6])), 0, 0));
  }
  return map;
}

void export_metrics_csv(std::span<const FrameMetrics> metrics,
                        const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "frame,t_detect_s,t_assoc_s,t_update_s,n_obs,n_landmarks\n";
  for (const FrameMetrics& m : metrics) {
    out << m.frame << ',' << format_double(m.t_detect) << ',' << format_double(m.t_associate)
        << ',' << format_double(m.t_update) << ',' << m.n_observations << ','
        << m.n_landmarks << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

namespace {

struct Box {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void grow(const Eigen::Vector2d& p) {
    min_x = std::min(min_x, p.x());
    max_x = std::max(max_x, p.x());
    min_y = std::min(min_y, p.y());
    max_y = std::max(max_y, p.y());
  }
  bool valid() const { return min_x <= max_x && min_y <= max_y; }
};

// Clips the infinite line (point w, direction d) to the box; false when the
// intersection is empty.
bool clip_line(const Box& box, const Eigen::Vector2d& w, const Eigen::Vector2d& d,
               Eigen::Vector2d& p0, Eigen::Vector2d& p1) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  const double lo[2] = {box.min_x, box.min_y};
  const double hi[2] = {box.max_x, box.max_y};
  for (int axis = 0; axis < 2; ++axis) {
    if (std::abs(d[axis]) < 1e-15) {
      if (w[axis] < lo[axis] || w[axis] > hi[axis]) {
        return false;
      }
      continue;
    }
    double ta = (lo[axis] - w[axis]) / d[axis];
    double tb = (hi[axis] - w[axis]) / d[axis];
    if (ta > tb) {
      std::swap(ta, tb);
    }
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (!(t0 < t1)) {
    return false;
  }
  p0 = w + t0 * d;
  p1 = w + t1 * d;
  return true;
}

}  // namespace

void export_map_svg(const WallMap& map, const std::filesystem::path& path,
                    const SvgOptions& options) {
  Box box;
  for (const Landmark& lm : map.landmarks()) {
    box.grow(lm.mean.vec());
  }
  if (options.env != nullptr) {
    for (const auto& seg : options.env->walls()) {
      box.grow(seg.a);
      box.grow(seg.b);
    }
  }
  for (const Pose2D& pose : options.trajectory) {
    box.grow(pose.translation());
  }
  if (!box.valid()) {
    box = Box{-1.0, -1.0, 1.0, 1.0};
  }
  box.min_x -= options.margin;
  box.min_y -= options.margin;
  box.max_x += options.margin;
  box.max_y += options.margin;

  const double scale = 100.0;  // px per meter
  const double width = (box.max_x - box.min_x) * scale;
  const double height = (box.max_y - box.min_y) * scale;
  auto px = [&](const Eigen::Vector2d& p) {
    // y grows downward in SVG
    return Eigen::Vector2d((p.x() - box.min_x) * scale, (box.max_y - p.y()) * scale);
  };
  auto xy = [&](const Eigen::Vector2d& p) {
    const Eigen::Vector2d q = px(p);
    return format_double(q.x()) + "," + format_double(q.y());
  };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(width)
      << "\" height=\"" << format_double(height) << "\" viewBox=\"0 0 "
      << format_double(width) << ' ' << format_double(height) << "\">\n";

  if (options.env != nullptr && !options.env->walls().empty()) {
    out << "  <path fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"4\" d=\"";
    for (const auto& seg : options.env->walls()) {
      const Eigen::Vector2d a = px(seg.a);
      const Eigen::Vector2d b = px(seg.b);
      out << "M" << format_double(a.x()) << ' ' << format_double(a.y()) << " L"
          << format_double(b.x()) << ' ' << format_double(b.y()) << ' ';
    }
    out << "\"/>\n";
  }

  if (!options.trajectory.empty()) {
    out << "  <polyline fill=\"none\" stroke=\"#2060c0\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < options.trajectory.size(); ++i) {
      if (i > 0) {
        out << ' ';
      }
      out << xy(options.trajectory[i].translation());
    }
    out << "\"/>\n";
  }

  for (const Landmark& lm : map.landmarks()) {
    const Eigen::Vector2d w = lm.mean.vec();
    const Eigen::Vector2d dir(-w.normalized().y(), w.normalized().x());
    Eigen::Vector2d p0, p1;
    if (!clip_line(box, w, dir, p0, p1)) {
      continue;
    }
    const Eigen::Vector2d a = px(p0);
    const Eigen::Vector2d b = px(p1);
    out << "  <line x1=\"" << format_double(a.x()) << "\" y1=\"" << format_double(a.y())
        << "\" x2=\"" << format_double(b.x()) << "\" y2=\"" << format_double(b.y())
        << "\" stroke=\"#d04040\" stroke-width=\"2\"/>\n";
  }

  out << "</svg>\n";
  if (!out) {
    throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

}  // namespace wallmap
