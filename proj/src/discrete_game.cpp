#include "racing/discrete_game.hpp"

#include <cmath>

namespace racing {

int Partition::bucket_of(double value) const {
  const int n = size();
  if (value < edges.front()) return 0;
  for (int i = 0; i < n; ++i) {
    if (value < edges[i + 1]) return i;
  }
  return n - 1;
}

Partition Partition::uniform(double lo, double hi, int buckets) {
  Partition p;
  p.edges.resize(buckets + 1);
  for (int i = 0; i <= buckets; ++i) {
    p.edges[i] = lo + (hi - lo) * i / buckets;
  }
  return p;
}

Partitions Partitions::defaults(const VehicleParams& p) {
  Partitions parts;
  // Finer than the branching bound alone would suggest: the reachability
  // prune keeps only a handful of speed buckets live at any state, and the
  // quantization loss against the curve caps shrinks with the bucket width.
  parts.speed = Partition::uniform(0.0, p.v_max, 12);
  parts.wear = Partition::uniform(0.0, 1.0, 20);
  return parts;
}

PlayerDiscrete discretize(const KartState& k, const TrackModel& track, const Partitions& parts) {
  PlayerDiscrete d;
  d.cp = k.progress.ordinal(track.tau());
  d.lane = track.nearest_lane(track.project(k.pos).lateral);
  d.speed_bucket = parts.speed.bucket_of(k.v);
  d.wear_bucket = parts.wear.bucket_of(k.wear);
  d.time = round_time(k.last_cp_time, parts.time_quantum);
  d.lane_changes = k.lane_changes;
  return d;
}

std::optional<DiscreteTransition> estimate_transition(const PlayerDiscrete& s,
                                                      DiscreteAction a,
                                                      const TrackModel& track,
                                                      const VehicleParams& params,
                                                      const Partitions& parts) {
  const long next_ordinal = s.cp + 1;
  if (!track.closed() && next_ordinal >= track.tau()) return std::nullopt;
  const int cur_cp = track.checkpoint_of_ordinal(s.cp);
  const int next_cp = track.checkpoint_of_ordinal(next_ordinal);

  const Vec2 from = track.lane_anchor(cur_cp, s.lane).pos;
  const Vec2 to = track.lane_anchor(next_cp, a.lane).pos;
  const double dist = (to - from).norm();
  if (dist < 1e-9) return std::nullopt;

  const double v0 = parts.speed.midpoint(s.speed_bucket);
  const double v1 = parts.speed.midpoint(a.speed_bucket);
  if (v0 + v1 < 1e-9) return std::nullopt;

  // Reachability under the acceleration bound over this gap.
  if (std::abs(v1 * v1 - v0 * v0) > 2.0 * params.a_max * dist + 1e-9) return std::nullopt;

  // Curvature-based speed cap at the target checkpoint, grip taken at the
  // wear midpoint. Two contributions: the target lane's own radius (inside
  // of the turn loses the lane offset, outside gains it), and the extra
  // bending of a lane change executed across roughly two hops.
  const double wear_mid = parts.wear.midpoint(s.wear_bucket);
  double kappa = 0.0;
  if (track.kind_of(next_cp) == SegmentKind::Curve) {
    const double turn = wrap_angle(track.checkpoints()[next_cp].heading -
                                   track.checkpoints()[cur_cp].heading);
    const double side = turn >= 0.0 ? 1.0 : -1.0;  // +1: center is to the left
    const double lane_radius =
        std::max(1.0, track.curve_radius(next_cp) - side * track.lane_offsets()[a.lane]);
    kappa += 1.0 / lane_radius;
  }
  kappa += std::abs(track.lane_offsets()[a.lane] - track.lane_offsets()[s.lane]) / (dist * dist);
  if (kappa > 1e-9) {
    // Tracking-lag margin, matching the offline racing line's cap fraction.
    const double cap = 0.97 * std::sqrt(params.lat_max * grip(wear_mid, params) / kappa);
    if (v1 > cap + 1e-9) return std::nullopt;
  }

  DiscreteTransition tr;
  tr.dt = 2.0 * dist / (v0 + v1);  // trapezoidal profile between midpoints

  tr.next = s;
  tr.next.cp = next_ordinal;
  tr.next.lane = a.lane;
  tr.next.speed_bucket = a.speed_bucket;
  const double heading_delta =
      std::abs(wrap_angle(track.checkpoints()[next_cp].heading - track.checkpoints()[cur_cp].heading));
  tr.next.wear_bucket =
      parts.wear.bucket_of(1.0 - (1.0 - wear_mid) * std::exp(-params.wear_rate * heading_delta));
  tr.next.lane_changes =
      lane_counter_step(track.kind_of(cur_cp) == SegmentKind::Straight,
                        track.kind_of(next_cp) == SegmentKind::Straight, s.lane, a.lane,
                        s.lane_changes, false);
  tr.next.time = round_time(s.time + tr.dt, parts.time_quantum);
  return tr;
}

std::vector<DiscreteAction> legal_actions(const JointDiscrete& joint, int mover,
                                          const TrackModel& track,
                                          const VehicleParams& params,
                                          const Partitions& parts, const RuleConfig& rules,
                                          bool collision_prune) {
  const PlayerDiscrete& s = joint.p[mover];
  const PlayerDiscrete& opp = joint.p[1 - mover];
  const int next_cp = track.checkpoint_of_ordinal(s.cp + 1);
  const bool next_straight = track.kind_of(next_cp) == SegmentKind::Straight;

  std::vector<DiscreteAction> out;
  for (int lane = 0; lane < track.lane_count(); ++lane) {
    for (int sb = 0; sb < parts.speed.size(); ++sb) {
      const DiscreteAction a{lane, sb};
      const auto tr = estimate_transition(s, a, track, params, parts);
      if (!tr) continue;
      if (next_straight && tr->next.lane_changes > rules.lane_change_limit) continue;
      if (collision_prune && opp.cp == s.cp + 1 && lane == opp.lane &&
          std::abs(tr->next.time - opp.time) < rules.collision_time_threshold) {
        continue;
      }
      out.push_back(a);
    }
  }
  return out;
}

std::array<int, 2> turn_order(const JointDiscrete& joint) {
  if (joint.p[1].time < joint.p[0].time) return {1, 0};
  return {0, 1};
}

}  // namespace racing
