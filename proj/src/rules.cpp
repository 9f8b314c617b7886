#include "racing/rules.hpp"

#include <cmath>

#include "racing/errors.hpp"

namespace racing {

const char* violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::CollisionAtFault: return "collision_at_fault";
    case ViolationKind::CollisionNoFault: return "collision_no_fault";
    case ViolationKind::IllegalLaneChange: return "illegal_lane_change";
    case ViolationKind::OffTrack: return "off_track";
  }
  return "unknown";
}

ViolationKind violation_kind_from_name(const std::string& name) {
  if (name == "collision_at_fault") return ViolationKind::CollisionAtFault;
  if (name == "collision_no_fault") return ViolationKind::CollisionNoFault;
  if (name == "illegal_lane_change") return ViolationKind::IllegalLaneChange;
  if (name == "off_track") return ViolationKind::OffTrack;
  throw ParseError("unknown violation kind '" + name + "'");
}

bool is_behind(const KartState& i, const KartState& j, const TrackModel& track,
               const VehicleParams& p, const RuleConfig& cfg) {
  const double progress_i = track.arc_progress(i.pos, i.progress);
  const double progress_j = track.arc_progress(j.pos, j.progress);
  if (!(progress_i < progress_j)) return false;
  const Vec2 nose = i.pos + heading_dir(i.heading) * p.nose_offset;
  const Vec2 to_j = j.pos - nose;
  if (to_j.norm() < 1e-9) return true;
  const double bearing = wrap_angle(std::atan2(to_j.y, to_j.x) - i.heading);
  return std::abs(bearing) <= cfg.behind_cone_half_angle;
}

double required_gap(const KartState& i, const KartState& j, const TrackModel& track,
                    const VehicleParams& p, const RuleConfig& cfg) {
  return is_behind(i, j, track, p, cfg) ? cfg.min_gap_behind : cfg.min_gap_side;
}

int lane_counter_step(bool prev_straight, bool next_straight, int prev_lane,
                      int next_lane, int l_prev, bool literal_reset) {
  if (literal_reset) {
    // Eq.-literal recurrence: any tick without a lane change resets the count.
    if (prev_straight == next_straight && next_lane != prev_lane) return l_prev + 1;
    return 0;
  }
  if (prev_straight != next_straight) return 0;  // section boundary
  if (next_lane != prev_lane) return l_prev + 1;
  return l_prev;
}

int update_lane_counter(int l_prev, const KartState& prev, const KartState& next,
                        const TrackModel& track, const RuleConfig& cfg) {
  const bool prev_straight =
      track.kind_of(track.nearest_checkpoint(prev.pos)) == SegmentKind::Straight;
  const bool next_straight =
      track.kind_of(track.nearest_checkpoint(next.pos)) == SegmentKind::Straight;
  const int prev_lane = track.nearest_lane(track.project(prev.pos).lateral);
  const int next_lane = track.nearest_lane(track.project(next.pos).lateral);
  return lane_counter_step(prev_straight, next_straight, prev_lane, next_lane, l_prev,
                           cfg.literal_lane_reset);
}

bool lane_limit_breached(int l_prev, int l_next, bool next_straight, const RuleConfig& cfg) {
  return next_straight && l_next == l_prev + 1 && l_next > cfg.lane_change_limit;
}

RulesTracker::RulesTracker(const TrackModel& track, const VehicleParams& params,
                           const RuleConfig& cfg)
    : track_(track), params_(params), cfg_(cfg) {}

std::vector<Violation> RulesTracker::tick(const KartState& a, const KartState& b,
                                          std::array<bool, 2> offtrack_raw,
                                          std::array<bool, 2> active) {
  const std::array<const KartState*, 2> karts = {&a, &b};
  std::vector<Violation> out;

  // Gap rule, evaluated per ordered pair; one violation per contact event.
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    if (!active[i] || !active[j]) {
      gap_open_[i] = false;
      continue;
    }
    const double gap = nose_distance(*karts[i], *karts[j], params_);
    const bool breach = gap < required_gap(*karts[i], *karts[j], track_, params_, cfg_);
    if (breach && !gap_open_[i]) {
      const bool at_fault = is_behind(*karts[i], *karts[j], track_, params_, cfg_);
      out.push_back({at_fault ? ViolationKind::CollisionAtFault
                              : ViolationKind::CollisionNoFault,
                     i, karts[i]->t});
    }
    gap_open_[i] = breach;
  }

  // Lane-change counter and limit, recomputed from positions.
  for (int i = 0; i < 2; ++i) {
    if (!active[i]) continue;
    if (have_prev_) {
      const int l_next = update_lane_counter(prev_l_[i], prev_[i], *karts[i], track_, cfg_);
      const bool next_straight =
          track_.kind_of(track_.nearest_checkpoint(karts[i]->pos)) == SegmentKind::Straight;
      if (lane_limit_breached(prev_l_[i], l_next, next_straight, cfg_)) {
        out.push_back({ViolationKind::IllegalLaneChange, i, karts[i]->t});
      }
      prev_l_[i] = l_next;
    }
  }

  // Off-track excursions, debounced per event.
  for (int i = 0; i < 2; ++i) {
    if (!active[i]) {
      offtrack_open_[i] = false;
      continue;
    }
    if (offtrack_raw[i] && !offtrack_open_[i]) {
      out.push_back({ViolationKind::OffTrack, i, karts[i]->t});
    }
    offtrack_open_[i] = offtrack_raw[i];
  }

  prev_[0] = a;
  prev_[1] = b;
  have_prev_ = true;
  for (const Violation& v : out) violations_.push_back(v);
  return out;
}

}  // namespace racing
