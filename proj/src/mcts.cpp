#include "racing/mcts.hpp"

#include <cmath>
#include <random>

#include "racing/errors.hpp"

namespace racing {

namespace {

struct GameState {
  JointDiscrete joint;
  std::array<bool, 2> stuck = {false, false};
};

struct Search {
  const TrackModel& track;
  const VehicleParams& params;
  const Partitions& parts;
  const RuleConfig& rules;
  const MctsConfig& cfg;
  std::array<long, 2> frontier;
  std::mt19937_64 rng;

  bool done(const GameState& s, int k) const {
    return s.stuck[k] || s.joint.p[k].cp >= frontier[k];
  }

  bool terminal(const GameState& s) const { return done(s, 0) && done(s, 1); }

  // Min-time player among those still short of the frontier; ties by id.
  int mover_of(const GameState& s) const {
    int m = -1;
    for (int k = 0; k < 2; ++k) {
      if (done(s, k)) continue;
      if (m < 0 || s.joint.p[k].time < s.joint.p[m].time) m = k;
    }
    return m;
  }

  std::vector<DiscreteAction> actions_of(const GameState& s, int mover) const {
    auto acts = legal_actions(s.joint, mover, track, params, parts, rules, true);
    if (acts.empty()) {
      // Fallback: accept collision risk, rely on low-level avoidance. The
      // lane-change limit is never relaxed.
      acts = legal_actions(s.joint, mover, track, params, parts, rules, false);
    }
    return acts;
  }

  // Advance forced situations: a mover with no actions is marked stuck and
  // charged the time penalty, play continues with the other player.
  void normalize(GameState& s) const {
    while (!terminal(s)) {
      const int m = mover_of(s);
      if (!actions_of(s, m).empty()) return;
      s.stuck[m] = true;
      s.joint.p[m].time += cfg.stuck_time_penalty;
    }
  }

  GameState apply(const GameState& s, int mover, DiscreteAction a) const {
    GameState next = s;
    const auto tr = estimate_transition(s.joint.p[mover], a, track, params, parts);
    next.joint.p[mover] = tr->next;
    normalize(next);
    return next;
  }

  double terminal_value(const GameState& s, int ego) const {
    return s.joint.p[1 - ego].time - s.joint.p[ego].time;
  }

  // Greedy default policy: fastest feasible bucket, prefer holding the lane.
  DiscreteAction rollout_action(const GameState& s, int mover,
                                const std::vector<DiscreteAction>& acts) const {
    const int cur_lane = s.joint.p[mover].lane;
    int best = 0;
    for (std::size_t i = 1; i < acts.size(); ++i) {
      const DiscreteAction& a = acts[i];
      const DiscreteAction& b = acts[best];
      const bool keep_a = a.lane == cur_lane;
      const bool keep_b = b.lane == cur_lane;
      if (a.speed_bucket > b.speed_bucket ||
          (a.speed_bucket == b.speed_bucket && keep_a && !keep_b)) {
        best = static_cast<int>(i);
      }
    }
    return acts[best];
  }

  double rollout(GameState s, int ego) {
    while (!terminal(s)) {
      const int m = mover_of(s);
      const auto acts = actions_of(s, m);
      s = apply(s, m, rollout_action(s, m, acts));
    }
    return terminal_value(s, ego);
  }
};

struct Node {
  GameState state;
  int mover = -1;  // -1 at terminal nodes
  std::vector<DiscreteAction> actions;
  std::vector<int> child;  // parallel to actions; -1 until expanded
  int visits = 0;
  double value_sum = 0.0;
};

}  // namespace

WaypointPlan mcts_plan(const JointDiscrete& root_joint, int ego, double epoch,
                       const TrackModel& track, const VehicleParams& params,
                       const Partitions& parts, const RuleConfig& rules,
                       const MctsConfig& cfg, std::uint64_t seed, MctsStats* stats) {
  Search search{track, params, parts, rules, cfg,
                {root_joint.p[0].cp + cfg.horizon, root_joint.p[1].cp + cfg.horizon},
                std::mt19937_64(seed)};

  GameState root_state{root_joint, {false, false}};
  search.normalize(root_state);
  if (root_state.stuck[ego]) {
    throw EmptyActionSetError("mcts_plan: ego player has no legal root action");
  }

  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
  const auto make_node = [&](GameState s) {
    Node n;
    n.state = std::move(s);
    if (!search.terminal(n.state)) {
      n.mover = search.mover_of(n.state);
      n.actions = search.actions_of(n.state, n.mover);
      n.child.assign(n.actions.size(), -1);
    }
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  };
  make_node(root_state);

  std::vector<int> path;
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    path.clear();
    int idx = 0;
    path.push_back(idx);

    // Selection: descend fully-expanded nodes by UCB1, signed per mover.
    while (nodes[idx].mover >= 0) {
      Node& n = nodes[idx];
      std::vector<int> untried;
      for (std::size_t i = 0; i < n.child.size(); ++i) {
        if (n.child[i] < 0) untried.push_back(static_cast<int>(i));
      }
      if (!untried.empty()) {
        // Expansion: one untried action, chosen at random.
        const int pick =
            untried[std::uniform_int_distribution<std::size_t>(0, untried.size() - 1)(search.rng)];
        const int child_idx = make_node(search.apply(n.state, n.mover, n.actions[pick]));
        nodes[idx].child[pick] = child_idx;
        idx = child_idx;
        path.push_back(idx);
        break;
      }
      const double sign = n.mover == ego ? 1.0 : -1.0;
      const double log_n = std::log(static_cast<double>(n.visits));
      int best = -1;
      double best_score = 0.0;
      for (std::size_t i = 0; i < n.child.size(); ++i) {
        const Node& c = nodes[n.child[i]];
        const double q = sign * (c.value_sum / c.visits);
        const double score = q + cfg.c_uct * std::sqrt(log_n / c.visits);
        if (best < 0 || score > best_score) {
          best = static_cast<int>(i);
          best_score = score;
        }
      }
      idx = nodes[idx].child[best];
      path.push_back(idx);
    }

    const double value = nodes[idx].mover < 0 ? search.terminal_value(nodes[idx].state, ego)
                                              : search.rollout(nodes[idx].state, ego);
    for (int i : path) {
      ++nodes[i].visits;
      nodes[i].value_sum += value;
    }
  }

  if (stats) {
    stats->root_visits = nodes[0].visits;
    stats->nodes = static_cast<int>(nodes.size());
  }

  // Extract the most-visited path; fill unexplored depth with the rollout
  // policy so the plan always spans the horizon.
  WaypointPlan plan;
  plan.ego = ego;
  plan.epoch = epoch;
  std::array<std::vector<PlanEntry>, 2> moves;  // per player, entry uses ego_* fields

  const auto record = [&](int player, DiscreteAction a, const PlayerDiscrete& arrived) {
    PlanEntry e;
    e.ego_cp = arrived.cp;
    e.ego_lane = a.lane;
    e.ego_speed = parts.speed.midpoint(a.speed_bucket);
    moves[player].push_back(e);
  };

  // A child with a handful of visits is noise, not a decision: beyond that
  // depth the greedy policy extends the plan instead.
  constexpr int kMinExtractVisits = 8;
  int idx = 0;
  GameState cursor = nodes[0].state;
  while (nodes[idx].mover >= 0) {
    const Node& n = nodes[idx];
    int best = -1;
    for (std::size_t i = 0; i < n.child.size(); ++i) {
      if (n.child[i] < 0 || nodes[n.child[i]].visits < kMinExtractVisits) continue;
      if (best < 0 || nodes[n.child[i]].visits > nodes[n.child[best]].visits) {
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    const int child_idx = n.child[best];
    record(n.mover, n.actions[best], nodes[child_idx].state.joint.p[n.mover]);
    cursor = nodes[child_idx].state;
    idx = child_idx;
  }
  while (!search.terminal(cursor)) {
    const int m = search.mover_of(cursor);
    const auto acts = search.actions_of(cursor, m);
    const DiscreteAction a = search.rollout_action(cursor, m, acts);
    cursor = search.apply(cursor, m, a);
    record(m, a, cursor.joint.p[m]);
  }

  // Pad stuck players so both sides cover the horizon.
  for (int k = 0; k < 2; ++k) {
    PlayerDiscrete last = root_joint.p[k];
    while (static_cast<int>(moves[k].size()) < cfg.horizon) {
      PlanEntry e;
      const long cp = moves[k].empty() ? last.cp + 1 : moves[k].back().ego_cp + 1;
      e.ego_cp = cp;
      e.ego_lane = moves[k].empty() ? last.lane : moves[k].back().ego_lane;
      e.ego_speed = moves[k].empty() ? parts.speed.midpoint(last.speed_bucket)
                                     : moves[k].back().ego_speed;
      moves[k].push_back(e);
    }
  }

  plan.entries.resize(cfg.horizon);
  for (int i = 0; i < cfg.horizon; ++i) {
    plan.entries[i].ego_cp = moves[ego][i].ego_cp;
    plan.entries[i].ego_lane = moves[ego][i].ego_lane;
    plan.entries[i].ego_speed = moves[ego][i].ego_speed;
    plan.entries[i].opp_cp = moves[1 - ego][i].ego_cp;
    plan.entries[i].opp_lane = moves[1 - ego][i].ego_lane;
    plan.entries[i].opp_speed = moves[1 - ego][i].ego_speed;
  }
  return plan;
}

}  // namespace racing
