#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "racing/mcts.hpp"
#include "racing/rewards.hpp"
#include "racing/rules.hpp"
#include "racing/track.hpp"
#include "racing/vehicle.hpp"

namespace racing {

// Replays are line-delimited JSON: one header record (embedding the track
// document, so replays are self-contained), then tick / plan / violation /
// passage records in simulation order, and a final result record. Two runs
// with the same config and seed produce byte-identical documents.
class ReplayWriter {
 public:
  explicit ReplayWriter(bool enabled) : enabled_(enabled) {}

  bool enabled() const { return enabled_; }

  void header(const TrackModel& track, const VehicleParams& vehicle, const RuleConfig& rules,
              std::uint64_t seed, int race_index, double dt, double time_limit, int laps,
              const std::array<std::string, 2>& players, const std::array<int, 2>& start_lanes);
  void tick(int k, const std::array<KartState, 2>& karts,
            const std::array<ControlInput, 2>& controls, const std::array<bool, 2>& offtrack,
            const std::array<bool, 2>& active, const std::array<double, 2>& lidar_min,
            const std::array<int, 2>& plan_ids);
  void plan(int player, int plan_id, const WaypointPlan& p);
  void violation(const Violation& v);
  void passage(const PassageRecord& p);
  void step_reward(int player, double t, const RewardBreakdown& r);
  void passage_reward(int player, double t, const RewardBreakdown& r);
  void result(const std::string& outcome, bool timeout,
              const std::array<std::optional<double>, 2>& finish_times,
              const std::array<int, 2>& fallback_counts);

  const std::string& text() const { return text_; }

 private:
  void append(const std::string& line);

  bool enabled_ = false;
  std::string text_;
};

struct ReplayTick {
  int k = 0;
  std::array<KartState, 2> karts;
  std::array<ControlInput, 2> controls;
  std::array<bool, 2> offtrack = {false, false};
  std::array<bool, 2> active = {true, true};
};

// Parsed replay document.
struct Replay {
  std::shared_ptr<TrackModel> track;
  VehicleParams vehicle;
  RuleConfig rules;
  std::uint64_t seed = 0;
  int race_index = 0;
  double dt = 0.02;
  double time_limit = 0.0;
  int laps = 0;
  std::array<std::string, 2> players;
  std::array<int, 2> start_lanes = {0, 0};
  std::vector<ReplayTick> ticks;
  std::vector<Violation> violations;
  std::vector<PassageRecord> passages;
  std::vector<std::pair<int, WaypointPlan>> plans;  // (plan_id, plan)
  // Recorded reward totals per player, when reward records are present.
  std::array<std::optional<RewardBreakdown>, 2> recorded_rewards;
  std::string outcome;
  bool timeout = false;
  std::array<std::optional<double>, 2> finish_times;
};

Replay parse_replay(const std::string& text);

struct RescoreResult {
  std::vector<Violation> violations;  // re-derived from tick states
  bool violations_match = false;      // equal to the recorded list
  std::array<RewardBreakdown, 2> rewards;  // re-derived totals
  std::array<bool, 2> rewards_match = {true, true};  // vs records, when present
};

// Re-derives violations (and reward breakdowns) from tick records alone,
// using the rules tracker and reward formulas, and checks them against the
// recorded ones.
RescoreResult rescore(const Replay& replay, const RuleConfig& rules, const RewardWeights& weights);

inline RescoreResult rescore(const std::string& text, const RuleConfig& rules,
                             const RewardWeights& weights) {
  return rescore(parse_replay(text), rules, weights);
}

}  // namespace racing
