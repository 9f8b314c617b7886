#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "racing/lqng.hpp"
#include "racing/mcts.hpp"
#include "racing/racing_line.hpp"
#include "racing/replay.hpp"
#include "racing/rewards.hpp"
#include "racing/rules.hpp"
#include "racing/track.hpp"
#include "racing/vehicle.hpp"

namespace racing {

enum class ControllerKind { MctsLqng, FixedLqng, NearestAnchorLqr };

const char* controller_kind_name(ControllerKind k);
ControllerKind controller_kind_from_name(const std::string& name);

struct RaceConfig {
  std::string track_path;
  int laps = 2;  // closed tracks; point-to-point tracks ignore this
  double dt = 0.02;
  double high_level_period = 1.0;
  double time_limit = 180.0;
  double start_speed = 5.0;  // rolling start, m/s
  int series_size = 50;
  std::uint64_t seed = 1;
  std::array<ControllerKind, 2> players = {ControllerKind::MctsLqng, ControllerKind::FixedLqng};
  VehicleParams vehicle;
  RuleConfig rules;
  LqWeights lq;
  LqngOptions lqng;  // dt is kept in sync with the outer dt
  MctsConfig mcts;
  RewardWeights rewards;
  bool record_rewards = false;
  std::string racing_line_cache;
  int racing_line_iterations = 200;

  void validate() const;  // throws ConfigError
};

// Load a JSON config document; unknown keys are rejected. Relative paths
// resolve against base_dir.
RaceConfig parse_race_config(const std::string& json_text, const std::string& base_dir);
RaceConfig load_race_config(const std::string& path);

struct ControlDiag {
  double rcond = 1.0;
  bool fallback = false;
  bool stale = false;
};

// Per-player control stack. replan() is invoked on high-level period
// boundaries; control() every tick. Implementations are deterministic
// functions of their seed and the observed states.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual void replan(const KartState& ego, const KartState& opp, ReplayWriter& replay,
                      int player) {}
  virtual ControlInput control(const KartState& ego, const KartState& opp,
                               ControlDiag* diag) = 0;
  virtual const WaypointPlan* plan() const { return nullptr; }
  virtual int plan_id() const { return -1; }
  virtual int fallback_count() const { return 0; }
};

std::unique_ptr<Controller> make_controller(ControllerKind kind, const RaceConfig& cfg,
                                            const TrackModel& track,
                                            std::shared_ptr<const RacingLine> line,
                                            std::uint64_t seed);

struct PerfStats {
  std::array<std::vector<double>, 2> control_seconds;
  std::array<std::vector<double>, 2> plan_seconds;

  void merge(const PerfStats& o);
};

enum class RaceOutcome { Player0, Player1, Draw };

struct RaceResult {
  RaceOutcome outcome = RaceOutcome::Draw;
  bool timeout = false;
  std::array<std::optional<double>, 2> finish_times;
  std::array<long, 2> final_ordinals = {0, 0};
  std::vector<Violation> violations;
  std::vector<PassageRecord> passages;
  std::array<int, 2> fallback_counts = {0, 0};
  std::string replay;  // empty when replay recording is disabled
  PerfStats perf;
};

// One deterministic head-to-head race: fixed-step loop at dt, high-level
// replans on exact period multiples, rules evaluated every tick. A planner
// failure degrades that player's control, never aborts the race.
RaceResult run_race(const RaceConfig& cfg, const TrackModel& track,
                    std::shared_ptr<const RacingLine> line, std::uint64_t seed,
                    std::array<int, 2> start_lanes, int race_index, bool record_replay);

// Test hook: run with externally supplied controllers (scripted scenarios).
RaceResult run_race_with_controllers(const RaceConfig& cfg, const TrackModel& track,
                                     std::array<Controller*, 2> controllers,
                                     std::array<int, 2> start_lanes, std::uint64_t seed,
                                     int race_index, bool record_replay);

struct PlayerMetrics {
  int wins = 0;
  double avg_collisions_at_fault = 0.0;
  double avg_illegal_lane_changes = 0.0;
  double safety_score = 0.0;  // sum of the two averages
  // Table-style waypoint adherence; absent for controllers without a plan.
  std::optional<double> avg_target_lane_distance;  // lane widths
  std::optional<double> avg_target_velocity_diff;  // m/s
};

struct SeriesResult {
  std::array<PlayerMetrics, 2> metrics;
  int draws = 0;
  int races = 0;
  std::vector<RaceResult> results;
  PerfStats perf;
};

// series_size races with start lanes alternating between the players.
// Metrics are folded in race order; (config, seed) determines every byte.
SeriesResult run_series(const RaceConfig& cfg, const TrackModel& track, bool record_replays);

// Metrics recomputation from parsed replays (CLI `metrics` subcommand and the
// replay-recount tests).
SeriesResult aggregate_replays(const std::vector<Replay>& replays);

std::string metrics_csv(const std::string& track_name,
                        const std::array<std::string, 2>& player_names,
                        const SeriesResult& series);

// Writes race_NNNN.jsonl files plus metrics.csv under out_dir.
void write_series_outputs(const std::string& track_name,
                          const std::array<std::string, 2>& player_names,
                          const SeriesResult& series, const std::string& out_dir);

}  // namespace racing
