#pragma once

#include <array>
#include <optional>
#include <vector>

#include "racing/rules.hpp"
#include "racing/track.hpp"
#include "racing/vehicle.hpp"

namespace racing {

// Half-open buckets [edges[i], edges[i+1]); values outside clamp to the outer
// buckets.
struct Partition {
  std::vector<double> edges;

  int size() const { return static_cast<int>(edges.size()) - 1; }
  int bucket_of(double value) const;
  double midpoint(int bucket) const {
    return 0.5 * (edges[bucket] + edges[bucket + 1]);
  }

  static Partition uniform(double lo, double hi, int buckets);
};

struct Partitions {
  Partition speed;
  Partition wear;
  double time_quantum = 0.01;  // time states round half-up to this

  // 8 uniform speed buckets over [0, v_max]; 5% wear buckets.
  static Partitions defaults(const VehicleParams& p);
};

inline double round_time(double t, double quantum) {
  return std::floor(t / quantum + 0.5) * quantum;
}

// One player's state in the checkpoint-lattice game.
struct PlayerDiscrete {
  long cp = 0;  // progress ordinal (lap * tau + checkpoint)
  int lane = 0;
  int speed_bucket = 0;
  int wear_bucket = 0;
  double time = 0.0;  // arrival time state at cp, rounded
  int lane_changes = 0;

  bool operator==(const PlayerDiscrete&) const = default;
};

struct JointDiscrete {
  std::array<PlayerDiscrete, 2> p;
};

struct DiscreteAction {
  int lane = 0;
  int speed_bucket = 0;

  bool operator==(const DiscreteAction&) const = default;
};

inline int action_index(DiscreteAction a, int speed_buckets) {
  return a.lane * speed_buckets + a.speed_bucket;
}

PlayerDiscrete discretize(const KartState& k, const TrackModel& track, const Partitions& parts);

struct DiscreteTransition {
  double dt = 0.0;
  PlayerDiscrete next;
};

// Inverse-dynamics approximation of one checkpoint hop: straight-line path
// between lane anchors, trapezoidal speed profile between bucket midpoints.
// Infeasible actions (acceleration bound, curve speed cap) return nullopt.
std::optional<DiscreteTransition> estimate_transition(const PlayerDiscrete& s,
                                                      DiscreteAction a,
                                                      const TrackModel& track,
                                                      const VehicleParams& params,
                                                      const Partitions& parts);

// All (lane, speed bucket) pairs minus: (a) dynamically infeasible moves,
// (b) lane changes past the limit on straights, (c) when `collision_prune`,
// arrivals into the opponent's committed lane within the time threshold
// (applies to the later-arriving mover only).
std::vector<DiscreteAction> legal_actions(const JointDiscrete& joint, int mover,
                                          const TrackModel& track,
                                          const VehicleParams& params,
                                          const Partitions& parts, const RuleConfig& rules,
                                          bool collision_prune = true);

// Player ids by ascending time state; ties by id.
std::array<int, 2> turn_order(const JointDiscrete& joint);

}  // namespace racing
