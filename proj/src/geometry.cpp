#include "racing/geometry.hpp"

#include <limits>

namespace racing {

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Point into box body frame (x along heading).
Vec2 to_body(Vec2 p, const OrientedBox& box) {
  const Vec2 d = p - box.center;
  const double c = std::cos(box.heading), s = std::sin(box.heading);
  return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

}  // namespace

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

double point_box_distance(Vec2 p, const OrientedBox& box) {
  const Vec2 q = to_body(p, box);
  const double dx = std::max(std::abs(q.x) - box.half_length, 0.0);
  const double dy = std::max(std::abs(q.y) - box.half_width, 0.0);
  return std::hypot(dx, dy);
}

bool boxes_overlap(const OrientedBox& a, const OrientedBox& b) {
  const OrientedBox* boxes[2] = {&a, &b};
  for (int k = 0; k < 2; ++k) {
    const OrientedBox& ref = *boxes[k];
    const OrientedBox& other = *boxes[1 - k];
    const Vec2 axes[2] = {heading_dir(ref.heading), heading_normal(ref.heading)};
    const double ext[2] = {ref.half_length, ref.half_width};
    const Vec2 oaxes[2] = {heading_dir(other.heading), heading_normal(other.heading)};
    const double oext[2] = {other.half_length, other.half_width};
    for (int i = 0; i < 2; ++i) {
      const double center_gap = std::abs(dot(other.center - ref.center, axes[i]));
      const double reach = ext[i] + oext[0] * std::abs(dot(oaxes[0], axes[i])) +
                           oext[1] * std::abs(dot(oaxes[1], axes[i]));
      if (center_gap > reach) return false;
    }
  }
  return true;
}

double ray_box_distance(Vec2 origin, Vec2 dir, const OrientedBox& box) {
  // Slab test in the box body frame.
  const Vec2 o = to_body(origin, box);
  const double c = std::cos(box.heading), s = std::sin(box.heading);
  const Vec2 d = {c * dir.x + s * dir.y, -s * dir.x + c * dir.y};

  double tmin = 0.0;
  double tmax = std::numeric_limits<double>::infinity();
  const double oc[2] = {o.x, o.y};
  const double dc[2] = {d.x, d.y};
  const double he[2] = {box.half_length, box.half_width};
  for (int i = 0; i < 2; ++i) {
    if (std::abs(dc[i]) < 1e-15) {
      if (std::abs(oc[i]) > he[i]) return -1.0;
      continue;
    }
    double t1 = (-he[i] - oc[i]) / dc[i];
    double t2 = (he[i] - oc[i]) / dc[i];
    if (t1 > t2) std::swap(t1, t2);
    tmin = std::max(tmin, t1);
    tmax = std::min(tmax, t2);
    if (tmin > tmax) return -1.0;
  }
  return tmin;
}

}  // namespace racing
