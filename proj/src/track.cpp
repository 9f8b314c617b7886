#include "racing/track.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "racing/errors.hpp"
#include "racing/rng.hpp"

namespace racing {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* kind_name(SegmentKind k) {
  return k == SegmentKind::Straight ? "straight" : "curve";
}

SegmentKind kind_from_name(const std::string& s) {
  if (s == "straight") return SegmentKind::Straight;
  if (s == "curve") return SegmentKind::Curve;
  throw ParseError("unknown segment kind '" + s + "'");
}

// Circumradius through three points; effectively infinite for collinear ones.
double circumradius(Vec2 a, Vec2 b, Vec2 c) {
  const double area2 = std::abs(cross(b - a, c - a));
  if (area2 < 1e-12) return 1e9;
  const double la = (b - a).norm();
  const double lb = (c - b).norm();
  const double lc = (c - a).norm();
  return std::min(1e9, la * lb * lc / (2.0 * area2));
}

// Emits checkpoints along straight/arc primitives; used by the track builders.
struct PathBuilder {
  Vec2 pos;
  double heading = 0.0;
  double spacing = 10.0;
  std::vector<Checkpoint> cps;

  void straight(double length, SegmentKind kind = SegmentKind::Straight) {
    const int n = std::max(1, static_cast<int>(std::lround(length / spacing)));
    const double step = length / n;
    const Vec2 dir = heading_dir(heading);
    for (int i = 0; i < n; ++i) {
      cps.push_back({pos + dir * (i * step), heading, kind});
    }
    pos = pos + dir * length;
  }

  // angle > 0 turns left (CCW), angle < 0 turns right.
  void arc(double radius, double angle) {
    const double arc_len = radius * std::abs(angle);
    const int n = std::max(2, static_cast<int>(std::lround(arc_len / spacing)));
    const double side = angle > 0 ? 1.0 : -1.0;
    const Vec2 center = pos + heading_normal(heading) * (side * radius);
    const Vec2 rel{pos.x - center.x, pos.y - center.y};
    for (int i = 0; i < n; ++i) {
      const double phi = angle * i / n;
      const double c = std::cos(phi), s = std::sin(phi);
      const Vec2 p{center.x + c * rel.x - s * rel.y, center.y + s * rel.x + c * rel.y};
      cps.push_back({p, heading + phi, SegmentKind::Curve});
    }
    const double c = std::cos(angle), s = std::sin(angle);
    pos = {center.x + c * rel.x - s * rel.y, center.y + s * rel.x + c * rel.y};
    heading = wrap_angle(heading + angle);
  }
};

}  // namespace

TrackModel::TrackModel(std::vector<Checkpoint> checkpoints, double width,
                       std::vector<double> lane_offsets, bool closed)
    : checkpoints_(std::move(checkpoints)),
      width_(width),
      lane_offsets_(std::move(lane_offsets)),
      closed_(closed) {
  validate();
  build_derived();
}

void TrackModel::validate() const {
  if (tau() < 2) throw ValidationError("track must have at least 2 checkpoints");
  if (!(width_ > 0.0)) throw ValidationError("width must be positive");
  if (lane_offsets_.empty()) throw ValidationError("lane_count must be positive");
  for (std::size_t i = 0; i < lane_offsets_.size(); ++i) {
    if (std::abs(lane_offsets_[i]) >= width_)
      throw ValidationError("lane offset magnitude must be less than width");
    if (i > 0 && !(lane_offsets_[i] > lane_offsets_[i - 1]))
      throw ValidationError("lane offsets must be strictly increasing");
    const double mirror = lane_offsets_[lane_offsets_.size() - 1 - i];
    if (std::abs(lane_offsets_[i] + mirror) > 1e-9)
      throw ValidationError("lane offsets must be symmetric about 0");
  }
  const int nseg = closed_ ? tau() : tau() - 1;
  for (int i = 0; i < nseg; ++i) {
    const Vec2 a = checkpoints_[i].pos;
    const Vec2 b = checkpoints_[(i + 1) % tau()].pos;
    const double len = (b - a).norm();
    if (len < 0.5)
      throw ValidationError("checkpoint spacing must be at least 0.5 m");
    if (dot(heading_dir(checkpoints_[i].heading), b - a) <= 0.0)
      throw ValidationError("checkpoints must be strictly ordered along travel direction");
  }
  if (closed_) {
    // Simple-closed-curve check: no intersection between non-adjacent segments.
    for (int i = 0; i < nseg; ++i) {
      for (int j = i + 2; j < nseg; ++j) {
        if (i == 0 && j == nseg - 1) continue;  // adjacent through the wrap
        const Vec2 a = checkpoints_[i].pos;
        const Vec2 b = checkpoints_[(i + 1) % tau()].pos;
        const Vec2 c = checkpoints_[j].pos;
        const Vec2 d = checkpoints_[(j + 1) % tau()].pos;
        if (segments_intersect(a, b, c, d))
          throw ValidationError("closed centerline must not self-intersect");
      }
    }
  }
}

void TrackModel::build_derived() {
  const int n = tau();
  cumulative_.assign(n, 0.0);
  for (int i = 1; i < n; ++i) {
    cumulative_[i] = cumulative_[i - 1] + (checkpoints_[i].pos - checkpoints_[i - 1].pos).norm();
  }
  total_length_ = cumulative_[n - 1];
  if (closed_) total_length_ += (checkpoints_[0].pos - checkpoints_[n - 1].pos).norm();

  radius_.assign(n, 1e9);
  for (int i = 0; i < n; ++i) {
    int prev = i - 1, next = i + 1;
    if (closed_) {
      prev = (i + n - 1) % n;
      next = (i + 1) % n;
    } else {
      prev = std::max(0, prev);
      next = std::min(n - 1, next);
      if (prev == i || next == i || prev == next) continue;
    }
    radius_[i] = circumradius(checkpoints_[prev].pos, checkpoints_[i].pos, checkpoints_[next].pos);
  }

  // Maximal same-kind runs, and section ids with the closed-track wrap merge.
  segments_.clear();
  section_.assign(n, 0);
  int run_start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || checkpoints_[i].kind != checkpoints_[run_start].kind) {
      segments_.push_back({run_start, i - 1, checkpoints_[run_start].kind});
      run_start = i;
    }
  }
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    for (int i = segments_[s].first; i <= segments_[s].last; ++i) {
      section_[i] = static_cast<int>(s);
    }
  }
  if (closed_ && segments_.size() > 1 && segments_.front().kind == segments_.back().kind) {
    for (int i = segments_.back().first; i <= segments_.back().last; ++i) section_[i] = 0;
  }
}

double TrackModel::lane_spacing() const {
  if (lane_count() < 2) return 1.0;
  return lane_offsets_[1] - lane_offsets_[0];
}

double TrackModel::centerline_distance(Vec2 position) const {
  double best = std::numeric_limits<double>::infinity();
  const int nseg = segment_count();
  for (int i = 0; i < nseg; ++i) {
    best = std::min(best, point_segment_distance(position, seg_a(i), seg_b(i)));
  }
  return best;
}

CenterlineProjection TrackModel::project(Vec2 position) const {
  CenterlineProjection out;
  out.distance = std::numeric_limits<double>::infinity();
  const int nseg = segment_count();
  for (int i = 0; i < nseg; ++i) {
    double t = 0.0;
    const double d = point_segment_distance(position, seg_a(i), seg_b(i), &t);
    if (d < out.distance) {
      const Vec2 a = seg_a(i), b = seg_b(i);
      const double len = (b - a).norm();
      out.distance = d;
      out.segment = i;
      out.arc = cumulative_[i] + t * len;
      const Vec2 dir = (b - a) * (1.0 / len);
      out.lateral = cross(dir, position - a);
      out.closest = a + (b - a) * t;
    }
  }
  return out;
}

bool TrackModel::gate_crossed(Vec2 position, int checkpoint) const {
  const Checkpoint& cp = checkpoints_[checkpoint];
  const Vec2 dir = heading_dir(cp.heading);
  const Vec2 d = position - cp.pos;
  const double along = dot(d, dir);
  const double lateral = std::abs(cross(dir, d));
  return along >= 0.0 && along <= width_ && lateral <= width_ + 1e-9;
}

int TrackModel::update_checkpoint_index(Vec2 position, int r_prev) const {
  int r = r_prev;
  while (r + 1 < tau() && gate_crossed(position, r + 1)) ++r;
  return r;
}

Progress TrackModel::advance_progress(Vec2 position, Progress prev) const {
  Progress p = prev;
  for (int guard = 0; guard <= tau(); ++guard) {
    int next_cp = p.checkpoint + 1;
    int next_lap = p.lap;
    if (next_cp >= tau()) {
      if (!closed_) return p;
      next_cp = 0;
      next_lap = p.lap + 1;
    }
    if (!gate_crossed(position, next_cp)) return p;
    p.checkpoint = next_cp;
    p.lap = next_lap;
  }
  return p;
}

double TrackModel::arc_progress(Vec2 position, Progress progress) const {
  const int r = progress.checkpoint;
  const int nseg = segment_count();
  double best_dist = std::numeric_limits<double>::infinity();
  double best_rel = 0.0;
  for (int offset = -2; offset <= 2; ++offset) {
    int seg = r + offset;
    if (closed_) {
      seg = ((seg % nseg) + nseg) % nseg;
    } else if (seg < 0 || seg >= nseg) {
      continue;
    }
    // Relative arc length from gate r to the start of this segment.
    double rel_base = 0.0;
    if (offset >= 0) {
      for (int k = 0; k < offset; ++k) {
        const int s = closed_ ? (r + k) % nseg : r + k;
        rel_base += (seg_b(s) - seg_a(s)).norm();
      }
    } else {
      for (int k = offset; k < 0; ++k) {
        const int s = closed_ ? ((r + k) % nseg + nseg) % nseg : r + k;
        rel_base -= (seg_b(s) - seg_a(s)).norm();
      }
    }
    double t = 0.0;
    const double d = point_segment_distance(position, seg_a(seg), seg_b(seg), &t);
    if (d < best_dist) {
      best_dist = d;
      best_rel = rel_base + t * (seg_b(seg) - seg_a(seg)).norm();
    }
  }
  return static_cast<double>(progress.lap) * total_length_ + cumulative_[r] + best_rel;
}

int TrackModel::nearest_lane(double lateral_offset) const {
  int best = 0;
  double best_err = std::abs(lateral_offset - lane_offsets_[0]);
  for (int k = 1; k < lane_count(); ++k) {
    const double err = std::abs(lateral_offset - lane_offsets_[k]);
    if (err < best_err) {
      best_err = err;
      best = k;
    }
  }
  return best;
}

int TrackModel::lane_of(Vec2 position) const {
  const CenterlineProjection p = project(position);
  if (p.distance > width_ + 1e-9)
    throw OffTrackError("lane_of: position is off track (q > width)");
  return nearest_lane(p.lateral);
}

int TrackModel::nearest_checkpoint(Vec2 position) const {
  int best = 0;
  double best_d2 = (position - checkpoints_[0].pos).squared_norm();
  for (int i = 1; i < tau(); ++i) {
    const double d2 = (position - checkpoints_[i].pos).squared_norm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

bool TrackModel::in_straight(Vec2 position) const {
  if (centerline_distance(position) > width_ + 1e-9)
    throw OffTrackError("in_straight: position is off track (q > width)");
  return checkpoints_[nearest_checkpoint(position)].kind == SegmentKind::Straight;
}

LaneAnchor TrackModel::lane_anchor(int checkpoint, int lane) const {
  if (checkpoint < 0 || checkpoint >= tau())
    throw ValidationError("lane_anchor: checkpoint index out of range");
  if (lane < 0 || lane >= lane_count())
    throw ValidationError("lane_anchor: lane index out of range");
  const Checkpoint& cp = checkpoints_[checkpoint];
  LaneAnchor anchor;
  anchor.checkpoint = checkpoint;
  anchor.lane = lane;
  anchor.pos = cp.pos + heading_normal(cp.heading) * lane_offsets_[lane];
  anchor.heading = cp.heading;
  return anchor;
}

int TrackModel::checkpoint_of_ordinal(long ordinal) const {
  if (ordinal < 0) return 0;
  if (closed_) return static_cast<int>(ordinal % tau());
  return static_cast<int>(std::min<long>(ordinal, tau() - 1));
}

TrackModel TrackModel::parse(const std::string& text) {
  std::optional<double> width;
  std::optional<int> lane_count;
  std::vector<double> lane_offsets;
  bool have_offsets = false;
  std::optional<bool> closed;
  std::vector<Checkpoint> cps;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    const auto fail = [&](const std::string& msg) {
      throw ParseError("line " + std::to_string(line_no) + ": " + msg);
    };
    if (key == "width") {
      double v;
      if (!(ls >> v)) fail("width expects a number");
      width = v;
    } else if (key == "lane_count") {
      int v;
      if (!(ls >> v)) fail("lane_count expects an integer");
      lane_count = v;
    } else if (key == "lane_offsets") {
      double v;
      while (ls >> v) lane_offsets.push_back(v);
      have_offsets = true;
    } else if (key == "closed") {
      std::string v;
      if (!(ls >> v) || (v != "true" && v != "false")) fail("closed expects true|false");
      closed = (v == "true");
    } else if (key == "checkpoint") {
      int index;
      double x, y, heading;
      std::string kind;
      if (!(ls >> index >> x >> y >> heading >> kind))
        fail("checkpoint expects: index x y heading straight|curve");
      if (index != static_cast<int>(cps.size()))
        fail("checkpoint indices must be contiguous from 0");
      cps.push_back({{x, y}, heading, kind_from_name(kind)});
    } else {
      fail("unknown key '" + key + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing tokens after '" + key + "'");
  }

  if (!width) throw ParseError("missing 'width'");
  if (!lane_count) throw ParseError("missing 'lane_count'");
  if (!have_offsets) throw ParseError("missing 'lane_offsets'");
  if (!closed) throw ParseError("missing 'closed'");
  if (static_cast<int>(lane_offsets.size()) != *lane_count)
    throw ValidationError("lane_offsets count must equal lane_count");
  return TrackModel(std::move(cps), *width, std::move(lane_offsets), *closed);
}

TrackModel TrackModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open track file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string TrackModel::serialize() const {
  std::ostringstream out;
  out << "width " << format_double(width_) << "\n";
  out << "lane_count " << lane_count() << "\n";
  out << "lane_offsets";
  for (double v : lane_offsets_) out << " " << format_double(v);
  out << "\n";
  out << "closed " << (closed_ ? "true" : "false") << "\n";
  for (int i = 0; i < tau(); ++i) {
    const Checkpoint& cp = checkpoints_[i];
    out << "checkpoint " << i << " " << format_double(cp.pos.x) << " "
        << format_double(cp.pos.y) << " " << format_double(cp.heading) << " "
        << kind_name(cp.kind) << "\n";
  }
  return out.str();
}

void TrackModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write track file: " + path);
  out << serialize();
}

std::uint64_t TrackModel::content_hash() const {
  const std::string s = serialize();
  return fnv1a64(s.data(), s.size());
}

TrackModel TrackModel::build_oval(double straight_length, double radius, double width,
                                  int lane_count, double lane_spacing,
                                  double checkpoint_spacing) {
  PathBuilder pb;
  pb.spacing = checkpoint_spacing;
  pb.straight(straight_length);
  pb.arc(radius, kPi);
  pb.straight(straight_length);
  pb.arc(radius, kPi);

  std::vector<double> offsets(lane_count);
  for (int k = 0; k < lane_count; ++k) {
    offsets[k] = (k - (lane_count - 1) * 0.5) * lane_spacing;
  }
  return TrackModel(std::move(pb.cps), width, std::move(offsets), true);
}

TrackModel TrackModel::build_complex(double width, int lane_count, double lane_spacing,
                                     double checkpoint_spacing) {
  PathBuilder pb;
  pb.spacing = checkpoint_spacing;

  // Bottom straight and the wide right-hand end.
  pb.straight(190.0);
  pb.arc(40.0, kPi);

  // Technical section along the top, travelling -x at y = 80:
  // a finger with a tight U-turn, then a sweeping S complex.
  pb.straight(45.0);
  pb.arc(14.0, kPi / 2);    // drop into the finger
  pb.straight(14.0);
  pb.arc(15.0, -kPi);       // tight U-turn, opposite direction
  pb.straight(14.0);
  pb.arc(14.0, kPi / 2);    // rejoin the top line
  pb.straight(8.0);
  pb.arc(34.0, -kPi / 6);   // sweep out...
  pb.arc(34.0, kPi / 6);
  pb.straight(6.0);
  pb.arc(34.0, kPi / 6);    // ...and back
  pb.arc(34.0, -kPi / 6);

  // Close onto the left-hand end semicircle. The short link is labelled as
  // curve so it reads as part of the corner complex.
  pb.straight(pb.pos.x, SegmentKind::Curve);
  pb.arc(40.0, kPi);

  std::vector<double> offsets(lane_count);
  for (int k = 0; k < lane_count; ++k) {
    offsets[k] = (k - (lane_count - 1) * 0.5) * lane_spacing;
  }
  return TrackModel(std::move(pb.cps), width, std::move(offsets), true);
}

}  // namespace racing
