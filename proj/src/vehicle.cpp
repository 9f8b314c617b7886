#include "racing/vehicle.hpp"

#include <cmath>

#include "racing/rules.hpp"

namespace racing {

double update_wear(double wear, double abs_yaw_rate, double dt, const VehicleParams& p) {
  if (abs_yaw_rate <= 0.0 || dt <= 0.0) return wear;
  return 1.0 - (1.0 - wear) * std::exp(-p.wear_rate * abs_yaw_rate * dt);
}

KartState step(const KartState& state, ControlInput u, double dt,
               const VehicleParams& p, const TrackModel& track) {
  const double a = std::clamp(u.accel, -p.a_max, p.a_max);
  double e = std::clamp(u.yaw_rate, -p.e_max, p.e_max);

  // Cornering limit: |v * e| <= lat_max * grip. Yaw rate is scaled down, never
  // the speed (understeer).
  const double lat_cap = p.lat_max * grip(state.wear, p);
  if (std::abs(state.v * e) > lat_cap) {
    e = std::copysign(lat_cap / state.v, e);
  }

  KartState next = state;
  next.pos.x = state.pos.x + state.v * std::cos(state.heading) * dt;
  next.pos.y = state.pos.y + state.v * std::sin(state.heading) * dt;
  next.v = std::clamp(state.v + a * dt, 0.0, p.v_max);
  next.heading = wrap_angle(state.heading + e * dt);
  next.wear = update_wear(state.wear, std::abs(e), dt, p);
  next.t = state.t + dt;

  next.progress = track.advance_progress(next.pos, state.progress);
  if (!(next.progress == state.progress)) next.last_cp_time = next.t;

  const CenterlineProjection proj = track.project(next.pos);
  next.lane = track.nearest_lane(proj.lateral);
  next.on_straight = track.kind_of(track.nearest_checkpoint(next.pos)) == SegmentKind::Straight;
  next.lane_changes = lane_counter_step(state.on_straight, next.on_straight, state.lane,
                                        next.lane, state.lane_changes, false);
  return next;
}

namespace {

// Distance along a ray to the q = width isoline, by sphere tracing: q is
// 1-Lipschitz, so stepping by (width - q) never skips the boundary.
double wall_ray_distance(Vec2 origin, Vec2 dir, const TrackModel& track, double max_range) {
  const double w = track.width();
  double t = 0.0;
  double q = track.centerline_distance(origin);
  for (int guard = 0; guard < 256; ++guard) {
    const double step = w - q;
    if (step < 1e-4) return t;
    if (t + step >= max_range) return max_range;
    t += step;
    q = track.centerline_distance(origin + dir * t);
  }
  return t;
}

}  // namespace

OrientedBox kart_box(const KartState& k, const VehicleParams& p) {
  return {k.pos, k.heading, p.kart_half_length, p.kart_half_width};
}

std::array<LidarReading, kLidarRayCount> lidar_scan(const KartState& self,
                                                    const KartState& opponent,
                                                    const TrackModel& track,
                                                    const VehicleParams& p) {
  std::array<LidarReading, kLidarRayCount> out;
  const OrientedBox opp_box = kart_box(opponent, p);
  for (int k = 0; k < kLidarRayCount; ++k) {
    const double angle = self.heading + k * (kPi / 8.0) - kPi / 2.0;
    const Vec2 dir = heading_dir(angle);
    double dist = wall_ray_distance(self.pos, dir, track, p.lidar_range);
    LidarHit hit = dist < p.lidar_range ? LidarHit::Wall : LidarHit::None;
    const double opp_t = ray_box_distance(self.pos, dir, opp_box);
    if (opp_t >= 0.0 && opp_t < dist && opp_t < p.lidar_range) {
      dist = opp_t;
      hit = LidarHit::Player;
    }
    out[k] = {std::min(dist, p.lidar_range), hit};
  }
  return out;
}

double nose_distance(const KartState& self, const KartState& other, const VehicleParams& p) {
  const Vec2 nose = self.pos + heading_dir(self.heading) * p.nose_offset;
  return point_box_distance(nose, kart_box(other, p));
}

}  // namespace racing
