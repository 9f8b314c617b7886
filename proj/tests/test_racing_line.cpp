#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "racing/racing_line.hpp"
#include "test_util.hpp"

using namespace racing;
using racing::test::circle_track;
using racing::test::straight_track;
using racing::test::test_oval;

namespace {

double line_curvature_cost(const std::vector<Vec2>& pts, bool closed) {
  const int n = static_cast<int>(pts.size());
  double total = 0.0;
  const int first = closed ? 0 : 1;
  const int last = closed ? n - 1 : n - 2;
  for (int i = first; i <= last; ++i) {
    const Vec2 a = pts[(i + n - 1) % n];
    const Vec2 b = pts[i];
    const Vec2 c = pts[(i + 1) % n];
    const double la = (b - a).norm(), lb = (c - b).norm(), lc = (c - a).norm();
    if (la * lb * lc < 1e-12) continue;
    const double k = 2.0 * std::abs(cross(b - a, c - b)) / (la * lb * lc);
    total += k * k;
  }
  return total;
}

}  // namespace

TEST_CASE("straight-only track keeps zero offsets") {
  const TrackModel track = straight_track();
  const VehicleParams params;
  const RacingLine line = compute_racing_line(track, params, 50);
  for (int i = 0; i < track.tau(); ++i) {
    CHECK((line.points[i] - track.checkpoints()[i].pos).norm() < 1e-6);
  }
  CHECK(line.curvature_cost == doctest::Approx(0.0));
}

TEST_CASE("circle track flattens toward the outer bound") {
  const TrackModel track = circle_track(40.0);
  const VehicleParams params;
  const RacingLine line = compute_racing_line(track, params, 100);

  // The optimized line radius is at least the centerline radius, and the
  // curvature objective does not exceed the centerline's.
  double mean_radius = 0.0;
  for (const Vec2& p : line.points) mean_radius += p.norm();
  mean_radius /= line.points.size();
  CHECK(mean_radius >= 40.0 - 1e-6);

  std::vector<Vec2> center;
  for (const Checkpoint& c : track.checkpoints()) center.push_back(c.pos);
  CHECK(line.curvature_cost <= line_curvature_cost(center, true) + 1e-12);
}

TEST_CASE("speed profile obeys the backward braking bound and curve caps") {
  const TrackModel track = TrackModel::build_complex();
  const VehicleParams params;
  const RacingLine line = compute_racing_line(track, params, 60);
  const int n = track.tau();
  for (int i = 0; i < n; ++i) {
    const int next = (i + 1) % n;
    const double gap = (line.points[next] - line.points[i]).norm();
    CHECK(line.speeds[i] * line.speeds[i] - line.speeds[next] * line.speeds[next] <=
          2.0 * params.a_max * gap + 1e-6);
    CHECK(line.speeds[i] <= params.v_max + 1e-9);
    CHECK(track.centerline_distance(line.points[i]) <= track.width() + 1e-9);
  }
}

TEST_CASE("optimization is deterministic and monotone in the objective") {
  const TrackModel track = test_oval();
  const VehicleParams params;
  const RacingLine a = compute_racing_line(track, params, 40);
  const RacingLine b = compute_racing_line(track, params, 40);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].x == b.points[i].x);
    CHECK(a.points[i].y == b.points[i].y);
    CHECK(a.speeds[i] == b.speeds[i]);
  }

  const RacingLine more = compute_racing_line(track, params, 80);
  CHECK(more.curvature_cost <= a.curvature_cost + 1e-12);
}

TEST_CASE("next_fixed_waypoint indexes the line by progress and wraps") {
  const TrackModel track = test_oval();
  const VehicleParams params;
  const RacingLine line = compute_racing_line(track, params, 20);

  KartState k = racing::test::kart_at(track, 3, 1, 5.0);
  const TargetWaypoint w = next_fixed_waypoint(k, line, track);
  CHECK(w.pos.x == line.points[4].x);

  k.progress = {0, track.tau() - 1};
  const TargetWaypoint wrapped = next_fixed_waypoint(k, line, track);
  CHECK(wrapped.pos.x == line.points[0].x);

  // Every emitted waypoint lies within the band.
  for (int cp = 0; cp < track.tau(); ++cp) {
    k.progress = {0, cp};
    const TargetWaypoint t = next_fixed_waypoint(k, line, track);
    CHECK(track.centerline_distance(t.pos) <= track.width() + 1e-9);
  }
}

TEST_CASE("cache round trip and track-hash invalidation") {
  const TrackModel track = test_oval();
  const VehicleParams params;
  const std::string path = (std::filesystem::temp_directory_path() /
                            "kartduel_line_cache_test.txt").string();
  std::filesystem::remove(path);

  const RacingLine computed = load_or_compute_racing_line(track, params, path, 30);
  REQUIRE(std::filesystem::exists(path));
  const RacingLine cached = load_or_compute_racing_line(track, params, path, 30);
  REQUIRE(cached.points.size() == computed.points.size());
  for (std::size_t i = 0; i < cached.points.size(); ++i) {
    CHECK(cached.points[i].x == computed.points[i].x);
    CHECK(cached.speeds[i] == computed.speeds[i]);
  }

  // A different track invalidates the cache.
  const TrackModel other = TrackModel::build_oval(120, 30, 6.0, 3, 2.0, 12.0);
  const RacingLine recomputed = load_or_compute_racing_line(other, params, path, 30);
  CHECK(recomputed.track_hash == other.content_hash());
  std::filesystem::remove(path);
}
