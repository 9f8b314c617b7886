#pragma once

#include <optional>
#include <vector>

#include "racing/mcts.hpp"
#include "racing/rules.hpp"
#include "racing/track.hpp"
#include "racing/vehicle.hpp"

namespace racing {

struct RewardWeights {
  double speed = 1.0;
  double direction = 0.02;
  double swerve = 1.0;
  double wall_hit = 0.5;
  double player_hit = 1.0;
  double player_hit_front = 1.0;  // extra when the hit comes from a front ray
  double checkpoint_base = 1.0;
  double checkpoint_time = 1.0;
  double target_lane = 1.0;      // omega1 of the target-closeness reward
  double target_velocity = 1.0;  // omega2
  double reverse = 1.0;
  double proximity_threshold = 2.0;  // h
  double alpha = 1.0;  // waypoint-error weight in the low-level objective
  // Literal reading of the waypoint-error recurrence: accumulate the distance
  // over every tick of the horizon instead of the single passage tick.
  bool per_tick_waypoint_error = false;
};

struct RewardBreakdown {
  double speed = 0.0;
  double direction = 0.0;
  double swerve = 0.0;
  double wall_hit = 0.0;
  double player_hit = 0.0;
  double checkpoint_base = 0.0;
  double checkpoint_time = 0.0;
  double target = 0.0;
  double reverse = 0.0;

  double total() const {
    return speed + direction + swerve + wall_hit + player_hit + checkpoint_base +
           checkpoint_time + target + reverse;
  }

  RewardBreakdown& operator+=(const RewardBreakdown& o);
};

// Per-tick components: speed and next-checkpoint direction rewards, the
// swerve penalty, and the LIDAR wall/player proximity penalties.
RewardBreakdown step_rewards(const KartState& state,
                             const std::array<LidarReading, kLidarRayCount>& lidar,
                             Vec2 next_checkpoint_pos, const RewardWeights& w,
                             const VehicleParams& params, const RuleConfig& rules);

// One checkpoint passage, as recorded by the harness.
struct PassageRecord {
  int player = 0;
  long ordinal = 0;
  double t = 0.0;
  int order = 1;  // 1 = first kart through this gate, 2 = second
  int lane = 0;
  double speed = 0.0;
  Vec2 pos;
  long r_prev = 0;  // progress ordinals before/after (reverse check)
  long r_new = 0;
  // Present when the player had an active plan covering this checkpoint.
  std::optional<int> target_lane;
  std::optional<double> target_speed;
  std::optional<Vec2> target_pos;
};

// Passage components: placement base, remaining-time bonus, closeness to the
// target lane/velocity, and the reverse penalty.
RewardBreakdown checkpoint_rewards(const PassageRecord& passage, double time_limit,
                                   const RewardWeights& w);

struct TrajectoryPoint {
  double t = 0.0;
  Vec2 pos;
  long ordinal = 0;
};

struct WaypointErrorResult {
  std::vector<double> eta;  // one per plan entry; 0 when unpassed
  double sum = 0.0;
  double weighted = 0.0;  // alpha * sum
};

// Tracking error of each plan waypoint: distance at the passage tick (or,
// under the literal flag, accumulated over every tick once passed).
// Unpassed waypoints contribute 0.
WaypointErrorResult waypoint_error(const std::vector<TrajectoryPoint>& trajectory,
                                   const WaypointPlan& plan, const TrackModel& track,
                                   const RewardWeights& w);

}  // namespace racing
