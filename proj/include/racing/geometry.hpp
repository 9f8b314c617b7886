#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace racing {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Unit vector for a heading angle (radians, CCW from +x).
inline Vec2 heading_dir(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Left-hand normal of a heading: positive lateral offsets point left of travel.
inline Vec2 heading_normal(double theta) { return {-std::sin(theta), std::cos(theta)}; }

// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

// Shift `target` by multiples of 2*pi so it lies within pi of `reference`.
inline double unwrap_near(double target, double reference) {
  return reference + wrap_angle(target - reference);
}

// Distance from point p to segment [a, b]; t_out receives the clamped parameter.
inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b, double* t_out = nullptr) {
  const Vec2 ab = b - a;
  const double len2 = ab.squared_norm();
  double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  if (t_out) *t_out = t;
  return (p - (a + ab * t)).norm();
}

// True if segments [a,b] and [c,d] intersect (inclusive of endpoints).
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

// Axis-aligned-in-body-frame rectangle with a world pose.
struct OrientedBox {
  Vec2 center;
  double heading = 0.0;
  double half_length = 0.5;  // along heading
  double half_width = 0.3;   // across heading
};

// Euclidean distance from a point to the box (0 if inside).
double point_box_distance(Vec2 p, const OrientedBox& box);

// Separating-axis overlap test for two boxes.
bool boxes_overlap(const OrientedBox& a, const OrientedBox& b);

// First intersection of the ray origin + t*dir (t >= 0) with the box boundary.
// Returns a negative value when the ray misses. A ray starting inside hits at 0.
double ray_box_distance(Vec2 origin, Vec2 dir, const OrientedBox& box);

}  // namespace racing
