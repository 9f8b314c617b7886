#pragma once

#include <optional>
#include <vector>

#include "racing/track.hpp"
#include "racing/vehicle.hpp"

namespace racing {

struct RuleConfig {
  double min_gap_side = 1.0;    // s0
  double min_gap_behind = 3.0;  // s1, must exceed s0
  int lane_change_limit = 2;    // L, per contiguous straight section
  double behind_cone_half_angle = kPi / 3.0;
  double collision_time_threshold = 0.5;  // high-level same-lane arrival window, s
  // Literal transcription of the counter recurrence: reset to 0 on any tick
  // without a lane change. Kept for comparison; the default holds the count
  // within a section.
  bool literal_lane_reset = false;
};

enum class ViolationKind { CollisionAtFault, CollisionNoFault, IllegalLaneChange, OffTrack };

struct Violation {
  ViolationKind kind = ViolationKind::CollisionAtFault;
  int player = 0;
  double time = 0.0;
};

const char* violation_kind_name(ViolationKind k);
ViolationKind violation_kind_from_name(const std::string& name);

// True iff i trails j in centerline arc progress (strictly) and j lies within
// the forward bearing cone from i's nose.
bool is_behind(const KartState& i, const KartState& j, const TrackModel& track,
               const VehicleParams& p, const RuleConfig& cfg);

// s1 when behind, s0 otherwise: the minimum allowed nose distance d^i(x^j).
double required_gap(const KartState& i, const KartState& j, const TrackModel& track,
                    const VehicleParams& p, const RuleConfig& cfg);

// Counter recurrence shared by the simulator and the rules tracker.
int lane_counter_step(bool prev_straight, bool next_straight, int prev_lane,
                      int next_lane, int l_prev, bool literal_reset);

// l update between two consecutive tick states. Lane and section kind are
// recomputed from the positions.
int update_lane_counter(int l_prev, const KartState& prev, const KartState& next,
                        const TrackModel& track, const RuleConfig& cfg);

// True when this counter transition is an excess lane change on a straight.
bool lane_limit_breached(int l_prev, int l_next, bool next_straight, const RuleConfig& cfg);

// Streaming rule evaluation over a race. Gap and off-track breaches are
// debounced into one Violation per event; lane-limit violations fire once per
// excess change. Deterministic: replaying the same tick stream reproduces the
// identical violation list.
class RulesTracker {
 public:
  RulesTracker(const TrackModel& track, const VehicleParams& params, const RuleConfig& cfg);

  // Feed one tick (both karts post-step). `offtrack_raw[k]` flags that player
  // k's raw position left the band this tick (before any wall clamp).
  // `active[k]` excludes finished players from rule evaluation.
  std::vector<Violation> tick(const KartState& a, const KartState& b,
                              std::array<bool, 2> offtrack_raw,
                              std::array<bool, 2> active = {true, true});

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  const TrackModel& track_;
  VehicleParams params_;
  RuleConfig cfg_;
  std::array<bool, 2> gap_open_ = {false, false};      // per ordered pair (i, 1-i)
  std::array<bool, 2> offtrack_open_ = {false, false};
  std::array<int, 2> prev_l_ = {0, 0};
  bool have_prev_ = false;
  std::array<KartState, 2> prev_;
  std::vector<Violation> violations_;
};

}  // namespace racing
