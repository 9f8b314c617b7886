#include <doctest.h>

#include <cstring>
#include <random>

#include "racing/vehicle.hpp"
#include "test_util.hpp"

using namespace racing;
using racing::test::kart_at;
using racing::test::test_oval;

TEST_CASE("step integrates a straight line exactly") {
  const TrackModel track = test_oval();
  const VehicleParams p;
  KartState k = kart_at(track, 1, 1, 10.0);
  const KartState next = step(k, {0.0, 0.0}, 0.02, p, track);
  CHECK(next.pos.x == doctest::Approx(k.pos.x + 0.2));
  CHECK(next.pos.y == doctest::Approx(k.pos.y));
  CHECK(next.v == doctest::Approx(10.0));
  CHECK(next.heading == doctest::Approx(k.heading));
  CHECK(next.t == doctest::Approx(0.02));
}

TEST_CASE("cornering limit scales the yaw rate, not the speed") {
  const TrackModel track = test_oval();
  VehicleParams p;
  p.lat_max = 10.0;  // grip(0) = 1 so the cap is exactly 10 m/s^2
  KartState k = kart_at(track, 1, 1, 20.0);
  const KartState next = step(k, {0.0, 1.0}, 0.02, p, track);
  // |v*e| = 20 > 10, so e_eff = 0.5 rad/s.
  CHECK(next.heading - k.heading == doctest::Approx(0.5 * 0.02));
  CHECK(next.v == doctest::Approx(20.0));
}

TEST_CASE("update_wear identities") {
  VehicleParams p;
  CHECK(update_wear(0.3, 0.0, 0.02, p) == doctest::Approx(0.3));

  p.wear_rate = std::log(2.0);
  CHECK(update_wear(0.0, 1.0, 1.0, p) == doctest::Approx(0.5));

  // Semigroup: two half steps equal one full step.
  p.wear_rate = 0.13;
  const double full = update_wear(0.2, 0.7, 0.04, p);
  const double halves = update_wear(update_wear(0.2, 0.7, 0.02, p), 0.7, 0.02, p);
  CHECK(full == doctest::Approx(halves).epsilon(1e-12));
}

TEST_CASE("step matches a 10x finer integration on random rollouts") {
  const TrackModel track = racing::test::straight_track(60, 40.0);
  const VehicleParams p;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(-p.a_max, p.a_max);
  std::uniform_real_distribution<double> ue(-p.e_max, p.e_max);

  KartState coarse = kart_at(track, 0, 1, 12.0);
  KartState fine = coarse;
  double path = 0.0;
  for (int i = 0; i < 500; ++i) {
    const ControlInput u{ua(rng), ue(rng)};
    path += coarse.v * 0.02;
    coarse = step(coarse, u, 0.02, p, track);
    for (int s = 0; s < 10; ++s) fine = step(fine, u, 0.002, p, track);
  }
  const double err = (coarse.pos - fine.pos).norm();
  CHECK(err < 0.005 * std::max(1.0, path));
}

TEST_CASE("step invariants on random trajectories") {
  const TrackModel track = test_oval();
  const VehicleParams p;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(-p.a_max, p.a_max);
  std::uniform_real_distribution<double> ue(-p.e_max, p.e_max);

  KartState k = kart_at(track, 0, 1, 5.0);
  double prev_wear = k.wear;
  for (int i = 0; i < 2000; ++i) {
    k = step(k, {ua(rng), ue(rng)}, 0.02, p, track);
    CHECK(k.v >= 0.0);
    CHECK(k.v <= p.v_max);
    CHECK(k.wear >= prev_wear);
    CHECK(grip(k.wear, p) <= grip(prev_wear, p));
    prev_wear = k.wear;
  }
}

TEST_CASE("step is deterministic and zero control is a fixed point") {
  const TrackModel track = test_oval();
  const VehicleParams p;
  KartState k = kart_at(track, 3, 0, 17.3, 0.2);
  k.wear = 0.31;

  const KartState a = step(k, {1.25, -0.75}, 0.02, p, track);
  const KartState b = step(k, {1.25, -0.75}, 0.02, p, track);
  CHECK(std::memcmp(&a.pos, &b.pos, sizeof a.pos) == 0);
  CHECK(a.v == b.v);
  CHECK(a.heading == b.heading);
  CHECK(a.wear == b.wear);

  KartState rest = kart_at(track, 3, 0, 0.0);
  const KartState still = step(rest, {0.0, 0.0}, 0.02, p, track);
  CHECK(still.pos.x == rest.pos.x);
  CHECK(still.pos.y == rest.pos.y);
  CHECK(still.v == 0.0);
  CHECK(still.heading == rest.heading);
  CHECK(still.wear == rest.wear);
  CHECK(still.t == doctest::Approx(0.02));
}

namespace {

// 1 cm ray-marching oracle for the LIDAR model.
LidarReading march_ray(Vec2 origin, double angle, const TrackModel& track,
                       const OrientedBox& opp, double range) {
  const Vec2 dir = heading_dir(angle);
  for (double t = 0.0; t <= range; t += 0.01) {
    const Vec2 p = origin + dir * t;
    if (point_box_distance(p, opp) <= 0.0) return {t, LidarHit::Player};
    if (track.centerline_distance(p) > track.width()) return {t, LidarHit::Wall};
  }
  return {range, LidarHit::None};
}

}  // namespace

TEST_CASE("lidar geometry basics") {
  const TrackModel track = test_oval();
  const VehicleParams p;

  // Centered on the straight, facing along the track: both perpendicular
  // rays read the half width.
  KartState self = kart_at(track, 2, 1, 0.0);
  KartState opp = kart_at(track, 20, 1, 0.0);  // far away
  const auto scan = lidar_scan(self, opp, track, p);
  CHECK(scan[0].distance == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(scan[0].hit == LidarHit::Wall);
  CHECK(scan[8].distance == doctest::Approx(6.0).epsilon(1e-6));

  // Opponent dead ahead: the center ray hits its rear face.
  opp = kart_at(track, 2, 1, 0.0);
  opp.pos = self.pos + heading_dir(self.heading) * 3.0;
  const auto scan2 = lidar_scan(self, opp, track, p);
  CHECK(scan2[4].hit == LidarHit::Player);
  CHECK(scan2[4].distance == doctest::Approx(3.0 - p.kart_half_length));
}

TEST_CASE("lidar matches the ray-marching oracle") {
  const TrackModel track = test_oval();
  const VehicleParams p;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> angle(-kPi, kPi);

  for (int i = 0; i < 60; ++i) {
    KartState self;
    self.pos = racing::test::random_in_bounds(track, rng, 0.8);
    self.heading = angle(rng);
    KartState opp;
    opp.pos = racing::test::random_in_bounds(track, rng, 0.8);
    opp.heading = angle(rng);

    const auto scan = lidar_scan(self, opp, track, p);
    const OrientedBox box = kart_box(opp, p);
    for (int k = 0; k < kLidarRayCount; ++k) {
      const double ray_angle = self.heading + k * (kPi / 8.0) - kPi / 2.0;
      const LidarReading want = march_ray(self.pos, ray_angle, track, box, p.lidar_range);
      CHECK(std::abs(scan[k].distance - want.distance) < 0.02);
    }
  }
}

TEST_CASE("nose_distance") {
  const TrackModel track = test_oval();
  VehicleParams p;
  p.nose_offset = 0.5;
  p.kart_half_length = 0.5;
  p.kart_half_width = 0.3;

  KartState a = kart_at(track, 2, 1, 0.0);
  KartState b = a;
  CHECK(nose_distance(a, b, p) == doctest::Approx(0.0));

  b.pos = a.pos + heading_dir(a.heading) * 5.0;
  CHECK(nose_distance(a, b, p) == doctest::Approx(4.0));

  // Brute-force oracle: min over the four rectangle edges.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> coord(-8.0, 8.0);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int i = 0; i < 500; ++i) {
    KartState s;
    s.pos = {coord(rng), coord(rng)};
    s.heading = angle(rng);
    KartState o;
    o.pos = {coord(rng), coord(rng)};
    o.heading = angle(rng);

    const Vec2 nose = s.pos + heading_dir(s.heading) * p.nose_offset;
    const Vec2 dir = heading_dir(o.heading);
    const Vec2 nrm = heading_normal(o.heading);
    const Vec2 c1 = o.pos + dir * p.kart_half_length + nrm * p.kart_half_width;
    const Vec2 c2 = o.pos + dir * p.kart_half_length - nrm * p.kart_half_width;
    const Vec2 c3 = o.pos - dir * p.kart_half_length - nrm * p.kart_half_width;
    const Vec2 c4 = o.pos - dir * p.kart_half_length + nrm * p.kart_half_width;
    double want = std::min(std::min(point_segment_distance(nose, c1, c2),
                                    point_segment_distance(nose, c2, c3)),
                           std::min(point_segment_distance(nose, c3, c4),
                                    point_segment_distance(nose, c4, c1)));
    const Vec2 rel = nose - o.pos;
    const bool inside = std::abs(dot(rel, dir)) <= p.kart_half_length &&
                        std::abs(dot(rel, nrm)) <= p.kart_half_width;
    if (inside) want = 0.0;
    CHECK(nose_distance(s, o, p) == doctest::Approx(want).epsilon(1e-9));
  }
}
