#include "racing/racing_line.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "racing/errors.hpp"

namespace racing {

namespace {

constexpr double kGolden = 0.6180339887498949;

double menger_curvature(Vec2 a, Vec2 b, Vec2 c) {
  const double la = (b - a).norm();
  const double lb = (c - b).norm();
  const double lc = (c - a).norm();
  const double denom = la * lb * lc;
  if (denom < 1e-12) return 0.0;
  return 2.0 * std::abs(cross(b - a, c - b)) / denom;
}

struct LineProblem {
  const TrackModel& track;
  double bound = 0.0;
  std::vector<Vec2> base;     // checkpoint positions
  std::vector<Vec2> normals;  // left normals at checkpoints

  Vec2 point(int i, double offset) const { return base[i] + normals[i] * offset; }

  int n() const { return static_cast<int>(base.size()); }

  bool curvature_index_valid(int i) const {
    return track.closed() || (i >= 1 && i <= n() - 2);
  }

  double curvature_sq_at(const std::vector<double>& offsets, int i) const {
    if (!curvature_index_valid(i)) return 0.0;
    const int count = n();
    const int prev = (i + count - 1) % count;
    const int next = (i + 1) % count;
    const double k = menger_curvature(point(prev, offsets[prev]), point(i, offsets[i]),
                                      point(next, offsets[next]));
    return k * k;
  }

  double cost(const std::vector<double>& offsets) const {
    double total = 0.0;
    for (int i = 0; i < n(); ++i) total += curvature_sq_at(offsets, i);
    return total;
  }

  // Offset i only influences the curvature terms at i-1, i, i+1.
  double local_cost(std::vector<double>& offsets, int i, double value) const {
    const double saved = offsets[i];
    offsets[i] = value;
    const int count = n();
    double total = 0.0;
    for (int d = -1; d <= 1; ++d) {
      const int j = ((i + d) % count + count) % count;
      total += curvature_sq_at(offsets, j);
    }
    offsets[i] = saved;
    return total;
  }
};

double golden_section_min(const LineProblem& prob, std::vector<double>& offsets, int i,
                          double lo, double hi) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = prob.local_cost(offsets, i, x1);
  double f2 = prob.local_cost(offsets, i, x2);
  for (int iter = 0; iter < 40 && (b - a) > 1e-4; ++iter) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = prob.local_cost(offsets, i, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = prob.local_cost(offsets, i, x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

RacingLine compute_racing_line(const TrackModel& track, const VehicleParams& params,
                               int max_iterations, std::uint64_t /*seed*/) {
  const int n = track.tau();
  LineProblem prob{track};
  // Wall margin sized for the low-level tracker's lateral overshoot, not
  // just the kart body.
  const double margin = params.kart_half_width + 1.45;
  prob.bound = std::max(0.0, track.width() - margin);
  prob.base.resize(n);
  prob.normals.resize(n);
  for (int i = 0; i < n; ++i) {
    prob.base[i] = track.checkpoints()[i].pos;
    prob.normals[i] = heading_normal(track.checkpoints()[i].heading);
  }

  std::vector<double> offsets(n, 0.0);
  double cost = prob.cost(offsets);
  int iterations_used = 0;
  for (int pass = 0; pass < max_iterations; ++pass) {
    ++iterations_used;
    for (int i = 0; i < n; ++i) {
      const double candidate = golden_section_min(prob, offsets, i, -prob.bound, prob.bound);
      if (prob.local_cost(offsets, i, candidate) < prob.local_cost(offsets, i, offsets[i])) {
        offsets[i] = candidate;
      }
    }
    const double new_cost = prob.cost(offsets);
    if (cost - new_cost < 1e-6 * std::max(1.0, cost)) {
      cost = new_cost;
      break;
    }
    cost = new_cost;
  }

  RacingLine line;
  line.track_hash = track.content_hash();
  line.iterations_used = iterations_used;
  line.curvature_cost = cost;
  line.points.resize(n);
  line.headings.resize(n);
  line.speeds.resize(n);
  for (int i = 0; i < n; ++i) line.points[i] = prob.point(i, offsets[i]);
  for (int i = 0; i < n; ++i) {
    const int prev = (i + n - 1) % n;
    const int next = (i + 1) % n;
    Vec2 d;
    if (track.closed()) {
      d = line.points[next] - line.points[prev];
    } else if (i == 0) {
      d = line.points[1] - line.points[0];
    } else if (i == n - 1) {
      d = line.points[n - 1] - line.points[n - 2];
    } else {
      d = line.points[next] - line.points[prev];
    }
    line.headings[i] = std::atan2(d.y, d.x);
  }

  // Speed caps from the optimized line's curvature, at fresh grip, with a
  // small margin for tracking lag so the follower is not pinned at the
  // adhesion limit.
  for (int i = 0; i < n; ++i) {
    const int prev = (i + n - 1) % n;
    const int next = (i + 1) % n;
    double cap = params.v_max;
    if (track.closed() || (i > 0 && i < n - 1)) {
      const double k = menger_curvature(line.points[prev], line.points[i], line.points[next]);
      if (k > 1e-9) cap = std::min(cap, 0.92 * std::sqrt(params.lat_max / k));
    }
    line.speeds[i] = cap;
  }
  // Backward braking feasibility; iterate to a fixed point on closed loops.
  // Brakes are budgeted at 60% so the online tracker starts slowing before
  // the corner instead of exactly at its adhesion limit.
  const double brake = 0.6 * params.a_max;
  const int passes = track.closed() ? 3 : 1;
  for (int p = 0; p < passes; ++p) {
    for (int i = n - 1; i >= 0; --i) {
      const int next = (i + 1) % n;
      if (!track.closed() && i == n - 1) continue;
      const double gap = (line.points[next] - line.points[i]).norm();
      const double allowed = std::sqrt(line.speeds[next] * line.speeds[next] +
                                       2.0 * brake * gap);
      line.speeds[i] = std::min(line.speeds[i], allowed);
    }
  }
  return line;
}

TargetWaypoint next_fixed_waypoint(const KartState& state, const RacingLine& line,
                                   const TrackModel& track) {
  const int cp = track.checkpoint_of_ordinal(state.progress.ordinal(track.tau()) + 1);
  return line.waypoint(cp);
}

std::string serialize_racing_line(const RacingLine& line) {
  std::ostringstream out;
  out << "track_hash " << line.track_hash << "\n";
  out << "iterations " << line.iterations_used << "\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.17g", line.curvature_cost);
  out << "curvature_cost " << buf << "\n";
  for (std::size_t i = 0; i < line.points.size(); ++i) {
    std::snprintf(buf, sizeof buf, "point %zu %.17g %.17g %.17g %.17g", i, line.points[i].x,
                  line.points[i].y, line.headings[i], line.speeds[i]);
    out << buf << "\n";
  }
  return out.str();
}

RacingLine parse_racing_line(const std::string& text) {
  RacingLine line;
  std::istringstream in(text);
  std::string key;
  while (in >> key) {
    if (key == "track_hash") {
      in >> line.track_hash;
    } else if (key == "iterations") {
      in >> line.iterations_used;
    } else if (key == "curvature_cost") {
      in >> line.curvature_cost;
    } else if (key == "point") {
      std::size_t idx;
      double x, y, h, v;
      if (!(in >> idx >> x >> y >> h >> v)) throw ParseError("malformed racing line point");
      line.points.push_back({x, y});
      line.headings.push_back(h);
      line.speeds.push_back(v);
    } else {
      throw ParseError("unknown racing line key '" + key + "'");
    }
  }
  return line;
}

RacingLine load_or_compute_racing_line(const TrackModel& track, const VehicleParams& params,
                                       const std::string& cache_path, int max_iterations) {
  if (!cache_path.empty()) {
    std::ifstream in(cache_path);
    if (in) {
      std::ostringstream buf;
      buf << in.rdbuf();
      try {
        RacingLine cached = parse_racing_line(buf.str());
        if (cached.track_hash == track.content_hash() &&
            cached.points.size() == static_cast<std::size_t>(track.tau())) {
          return cached;
        }
      } catch (const ParseError&) {
        // fall through to recompute
      }
    }
  }
  RacingLine line = compute_racing_line(track, params, max_iterations);
  if (!cache_path.empty()) {
    std::ofstream out(cache_path);
    if (out) out << serialize_racing_line(line);
  }
  return line;
}

}  // namespace racing
