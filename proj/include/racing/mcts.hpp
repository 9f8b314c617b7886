#pragma once

#include <cstdint>
#include <vector>

#include "racing/discrete_game.hpp"

namespace racing {

struct MctsConfig {
  int horizon = 5;       // checkpoints (H)
  int iterations = 2000;
  double c_uct = 1.4142135623730951;
  // Added to a player's time state when every action is pruned even after
  // relaxing the collision prune; keeps leaf values defined.
  double stuck_time_penalty = 100.0;
};

struct PlanEntry {
  long ego_cp = 0;
  int ego_lane = 0;
  double ego_speed = 0.0;  // bucket midpoint, m/s
  long opp_cp = 0;
  int opp_lane = 0;
  double opp_speed = 0.0;
};

// Per-checkpoint strategy for the ego player plus the predicted opponent
// best response, both over the next H checkpoints. Immutable once published.
struct WaypointPlan {
  int ego = 0;
  double epoch = 0.0;  // race time the plan was computed from
  std::vector<PlanEntry> entries;
};

struct MctsStats {
  int root_visits = 0;
  int nodes = 0;
};

// Receding-horizon UCT over the checkpoint lattice. The game is zero-sum in
// the frontier time difference: the leaf value is (opponent time - ego time)
// once both players have advanced `horizon` checkpoints, and opponent
// decision nodes minimize it. Deterministic for a given seed.
//
// Throws EmptyActionSetError when the ego player has no legal action at the
// root even after relaxing the collision prune.
WaypointPlan mcts_plan(const JointDiscrete& root, int ego, double epoch,
                       const TrackModel& track, const VehicleParams& params,
                       const Partitions& parts, const RuleConfig& rules,
                       const MctsConfig& cfg, std::uint64_t seed,
                       MctsStats* stats = nullptr);

}  // namespace racing
