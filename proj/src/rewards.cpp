#include "racing/rewards.hpp"

#include <algorithm>
#include <cmath>

namespace racing {

RewardBreakdown& RewardBreakdown::operator+=(const RewardBreakdown& o) {
  speed += o.speed;
  direction += o.direction;
  swerve += o.swerve;
  wall_hit += o.wall_hit;
  player_hit += o.player_hit;
  checkpoint_base += o.checkpoint_base;
  checkpoint_time += o.checkpoint_time;
  target += o.target;
  reverse += o.reverse;
  return *this;
}

RewardBreakdown step_rewards(const KartState& state,
                             const std::array<LidarReading, kLidarRayCount>& lidar,
                             Vec2 next_checkpoint_pos, const RewardWeights& w,
                             const VehicleParams& params, const RuleConfig& rules) {
  RewardBreakdown r;
  r.speed = w.speed * state.v / params.v_max;

  const Vec2 vel = heading_dir(state.heading) * state.v;
  const Vec2 to_next = next_checkpoint_pos - state.pos;
  r.direction = w.direction * dot(vel, to_next);

  if (state.on_straight && state.lane_changes > rules.lane_change_limit) {
    r.swerve = -w.swerve;
  }

  for (int j = 0; j < kLidarRayCount; ++j) {
    const bool close = lidar[j].distance < w.proximity_threshold;
    if (close && lidar[j].hit == LidarHit::Wall) {
      r.wall_hit -= w.wall_hit;
    }
    if (close && lidar[j].hit == LidarHit::Player) {
      const bool front = std::find(kLidarFrontRays.begin(), kLidarFrontRays.end(), j) !=
                         kLidarFrontRays.end();
      r.player_hit -= w.player_hit + (front ? w.player_hit_front : 0.0);
    }
  }
  return r;
}

RewardBreakdown checkpoint_rewards(const PassageRecord& passage, double time_limit,
                                   const RewardWeights& w) {
  RewardBreakdown r;
  r.checkpoint_base = passage.order == 1 ? w.checkpoint_base : 0.75 * w.checkpoint_base;
  r.checkpoint_time =
      time_limit > 0.0 ? w.checkpoint_time * (time_limit - passage.t) / time_limit : 0.0;
  if (passage.target_lane && passage.target_pos && passage.target_speed) {
    const double anchor_dist = (*passage.target_pos - passage.pos).norm();
    const double lane_gap = std::abs(passage.lane - *passage.target_lane);
    r.target = w.target_lane / std::pow(1.3, lane_gap * anchor_dist) +
               w.target_velocity / std::pow(1.1, std::abs(passage.speed - *passage.target_speed));
  }
  if (passage.r_new <= passage.r_prev) {
    r.reverse = -w.reverse;
  }
  return r;
}

WaypointErrorResult waypoint_error(const std::vector<TrajectoryPoint>& trajectory,
                                   const WaypointPlan& plan, const TrackModel& track,
                                   const RewardWeights& w) {
  WaypointErrorResult out;
  out.eta.assign(plan.entries.size(), 0.0);
  for (std::size_t e = 0; e < plan.entries.size(); ++e) {
    const PlanEntry& entry = plan.entries[e];
    const LaneAnchor anchor =
        track.lane_anchor(track.checkpoint_of_ordinal(entry.ego_cp), entry.ego_lane);
    bool passed = false;
    double at_passage = 0.0;
    double accumulated = 0.0;
    for (const TrajectoryPoint& p : trajectory) {
      accumulated += (p.pos - anchor.pos).norm();
      if (!passed && p.ordinal >= entry.ego_cp) {
        passed = true;
        at_passage = (p.pos - anchor.pos).norm();
      }
    }
    if (passed) {
      out.eta[e] = w.per_tick_waypoint_error ? accumulated : at_passage;
    }
  }
  for (double v : out.eta) out.sum += v;
  out.weighted = w.alpha * out.sum;
  return out;
}

}  // namespace racing
