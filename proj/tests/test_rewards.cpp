#include <doctest.h>

#include <random>

#include "racing/rewards.hpp"
#include "test_util.hpp"

using namespace racing;
using racing::test::kart_at;
using racing::test::test_oval;

namespace {

std::array<LidarReading, kLidarRayCount> all_readings(double dist, LidarHit hit) {
  std::array<LidarReading, kLidarRayCount> out;
  out.fill({dist, hit});
  return out;
}

}  // namespace

TEST_CASE("per-tick reward components") {
  const TrackModel track = test_oval();
  const VehicleParams params;
  const RuleConfig rules;
  RewardWeights w;
  w.speed = 2.0;
  w.wall_hit = 0.5;

  KartState k = kart_at(track, 2, 1, params.v_max);
  const Vec2 next_cp = track.checkpoints()[3].pos;

  // Top speed earns the full weight.
  auto r = step_rewards(k, all_readings(30.0, LidarHit::None), next_cp, w, params, rules);
  CHECK(r.speed == doctest::Approx(2.0));

  // Stationary: no speed and no direction reward.
  KartState still = kart_at(track, 2, 1, 0.0);
  r = step_rewards(still, all_readings(30.0, LidarHit::None), next_cp, w, params, rules);
  CHECK(r.speed == doctest::Approx(0.0));
  CHECK(r.direction == doctest::Approx(0.0));

  // Direction reward is the raw dot product, scaled by its weight.
  KartState moving = kart_at(track, 2, 1, 10.0);
  r = step_rewards(moving, all_readings(30.0, LidarHit::None), next_cp, w, params, rules);
  const Vec2 vel = heading_dir(moving.heading) * moving.v;
  const Vec2 to_next = next_cp - moving.pos;
  CHECK(r.direction == doctest::Approx(w.direction * dot(vel, to_next)));

  // All nine rays on a wall inside the proximity threshold.
  r = step_rewards(k, all_readings(w.proximity_threshold / 2, LidarHit::Wall), next_cp, w,
                   params, rules);
  CHECK(r.wall_hit == doctest::Approx(-9.0 * 0.5));
  CHECK(r.player_hit == doctest::Approx(0.0));

  // Player hits: base penalty per ray plus the front-ray surcharge.
  r = step_rewards(k, all_readings(w.proximity_threshold / 2, LidarHit::Player), next_cp, w,
                   params, rules);
  CHECK(r.player_hit ==
        doctest::Approx(-(9.0 * w.player_hit + 3.0 * w.player_hit_front)));

  // Swerve penalty only on straights past the limit.
  KartState swervy = kart_at(track, 2, 1, 10.0);
  swervy.lane_changes = rules.lane_change_limit + 1;
  r = step_rewards(swervy, all_readings(30.0, LidarHit::None), next_cp, w, params, rules);
  CHECK(r.swerve == doctest::Approx(-w.swerve));
  swervy.on_straight = false;
  r = step_rewards(swervy, all_readings(30.0, LidarHit::None), next_cp, w, params, rules);
  CHECK(r.swerve == doctest::Approx(0.0));
}

TEST_CASE("checkpoint passage components") {
  RewardWeights w;
  w.checkpoint_base = 1.0;
  w.checkpoint_time = 1.0;
  w.target_lane = 1.0;
  w.target_velocity = 1.0;

  PassageRecord p;
  p.order = 1;
  p.t = 0.0;
  p.lane = 1;
  p.speed = 12.0;
  p.pos = {10.0, 0.0};
  p.r_prev = 4;
  p.r_new = 5;
  p.target_lane = 1;
  p.target_speed = 12.0;
  p.target_pos = Vec2{10.0, 0.0};

  // Exact lane and velocity hit: both exponents are zero.
  auto r = checkpoint_rewards(p, 100.0, w);
  CHECK(r.target == doctest::Approx(2.0));
  CHECK(r.checkpoint_base == doctest::Approx(1.0));
  CHECK(r.checkpoint_time == doctest::Approx(1.0));  // t = 0
  CHECK(r.reverse == doctest::Approx(0.0));

  // Second through the gate earns 0.75 of the base.
  p.order = 2;
  r = checkpoint_rewards(p, 100.0, w);
  CHECK(r.checkpoint_base == doctest::Approx(0.75));

  // Time reward vanishes at the limit.
  p.t = 100.0;
  r = checkpoint_rewards(p, 100.0, w);
  CHECK(r.checkpoint_time == doctest::Approx(0.0));

  // Exponent structure: 1.3 on lane-distance, 1.1 on velocity gap.
  p.t = 0.0;
  p.lane = 2;
  p.pos = {13.0, 4.0};  // 5 m from the anchor
  p.speed = 9.0;
  r = checkpoint_rewards(p, 100.0, w);
  CHECK(r.target ==
        doctest::Approx(1.0 / std::pow(1.3, 1.0 * 5.0) + 1.0 / std::pow(1.1, 3.0)));

  // Reverse passage flags the penalty.
  p.r_new = 4;
  r = checkpoint_rewards(p, 100.0, w);
  CHECK(r.reverse == doctest::Approx(-w.reverse));

  // Totals are exact component sums.
  CHECK(r.total() == doctest::Approx(r.checkpoint_base + r.checkpoint_time + r.target +
                                     r.reverse));
}

TEST_CASE("target reward peaks at the exact hit and decays in each argument") {
  RewardWeights w;
  PassageRecord p;
  p.order = 1;
  p.lane = 1;
  p.speed = 10.0;
  p.pos = {0.0, 0.0};
  p.r_prev = 0;
  p.r_new = 1;
  p.target_lane = 1;
  p.target_speed = 10.0;
  p.target_pos = Vec2{0.0, 0.0};
  const double peak = checkpoint_rewards(p, 100.0, w).target;

  double prev = peak;
  for (double gap = 1.0; gap < 5.0; gap += 1.0) {
    PassageRecord q = p;
    q.lane = 2;
    q.pos = {gap, 0.0};
    const double val = checkpoint_rewards(q, 100.0, w).target;
    CHECK(val < prev);
    prev = val;
  }
  prev = peak;
  for (double dv = 1.0; dv < 5.0; dv += 1.0) {
    PassageRecord q = p;
    q.speed = 10.0 + dv;
    const double val = checkpoint_rewards(q, 100.0, w).target;
    CHECK(val < prev);
    prev = val;
  }
}

TEST_CASE("waypoint error: passage tick distance, unpassed contributes zero") {
  const TrackModel track = test_oval();
  RewardWeights w;
  w.alpha = 0.5;

  WaypointPlan plan;
  plan.ego = 0;
  plan.entries.push_back({3, 1, 10.0, 3, 2, 10.0});
  plan.entries.push_back({4, 1, 10.0, 4, 2, 10.0});
  plan.entries.push_back({5, 1, 10.0, 5, 2, 10.0});

  const Vec2 a3 = track.lane_anchor(3, 1).pos;
  std::vector<TrajectoryPoint> traj;
  traj.push_back({0.0, {20.0, 0.0}, 2});
  traj.push_back({0.02, a3, 3});  // exactly through the first waypoint
  traj.push_back({0.04, track.lane_anchor(4, 0).pos, 4});  // 2 m off the second

  const WaypointErrorResult r = waypoint_error(traj, plan, track, w);
  REQUIRE(r.eta.size() == 3);
  CHECK(r.eta[0] == doctest::Approx(0.0));
  CHECK(r.eta[1] == doctest::Approx(2.0));
  CHECK(r.eta[2] == doctest::Approx(0.0));  // never reached
  CHECK(r.sum == doctest::Approx(2.0));
  CHECK(r.weighted == doctest::Approx(1.0));

  // Literal per-tick accumulation variant.
  RewardWeights literal = w;
  literal.per_tick_waypoint_error = true;
  const WaypointErrorResult lr = waypoint_error(traj, plan, track, literal);
  double acc = 0.0;
  for (const TrajectoryPoint& p : traj) acc += (p.pos - a3).norm();
  CHECK(lr.eta[0] == doctest::Approx(acc));
}

TEST_CASE("rescoring recorded samples is bit-identical") {
  const TrackModel track = test_oval();
  const VehicleParams params;
  const RuleConfig rules;
  RewardWeights w;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(0.1, 25.0);
  std::uniform_int_distribution<int> hit(0, 2);

  for (int i = 0; i < 200; ++i) {
    KartState k = kart_at(track, i % track.tau(), i % 3, dist(rng));
    std::array<LidarReading, kLidarRayCount> lidar;
    for (auto& rr : lidar) rr = {dist(rng), static_cast<LidarHit>(hit(rng))};
    const Vec2 next_cp = track.checkpoints()[(i + 1) % track.tau()].pos;
    const RewardBreakdown a = step_rewards(k, lidar, next_cp, w, params, rules);
    const RewardBreakdown b = step_rewards(k, lidar, next_cp, w, params, rules);
    CHECK(a.total() == b.total());
    CHECK(a.speed == b.speed);
    CHECK(a.direction == b.direction);
    CHECK(a.wall_hit == b.wall_hit);
    CHECK(a.player_hit == b.player_hit);
  }
}
