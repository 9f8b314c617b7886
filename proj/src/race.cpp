#include "racing/race.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "racing/errors.hpp"
#include "racing/log.hpp"
#include "racing/rng.hpp"

namespace racing {

const char* controller_kind_name(ControllerKind k) {
  switch (k) {
    case ControllerKind::MctsLqng: return "mcts_lqng";
    case ControllerKind::FixedLqng: return "fixed_lqng";
    case ControllerKind::NearestAnchorLqr: return "nearest_anchor_lqr";
  }
  return "unknown";
}

ControllerKind controller_kind_from_name(const std::string& name) {
  if (name == "mcts_lqng") return ControllerKind::MctsLqng;
  if (name == "fixed_lqng") return ControllerKind::FixedLqng;
  if (name == "nearest_anchor_lqr") return ControllerKind::NearestAnchorLqr;
  throw ConfigError("unknown controller '" + name + "'");
}

void RaceConfig::validate() const {
  if (dt <= 0.0) throw ConfigError("dt must be positive");
  if (time_limit <= 0.0) throw ConfigError("time_limit must be positive");
  if (series_size < 1) throw ConfigError("series_size must be at least 1");
  if (laps < 1) throw ConfigError("laps must be at least 1");
  const double ratio = high_level_period / dt;
  if (std::abs(ratio - std::lround(ratio)) > 1e-9 || ratio < 1.0) {
    throw ConfigError("dt must divide high_level_period");
  }
  if (mcts.horizon < 1) throw ConfigError("mcts horizon must be at least 1");
  if (mcts.iterations < 1) throw ConfigError("mcts iterations must be at least 1");
  if (!(rules.min_gap_behind > rules.min_gap_side))
    throw ConfigError("rules: min_gap_behind must exceed min_gap_side");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Braking-aware speed target for the checkpoint after `ordinal`: the lowest
// of the upcoming curve caps, each relaxed by the braking distance available.
double safe_speed_toward(const TrackModel& track, const VehicleParams& p, long ordinal,
                         double wear, double cruise_cap) {
  double best = std::min(p.v_max, cruise_cap);
  const long target = ordinal + 1;
  double dist = 0.0;
  Vec2 prev_pos;
  for (int k = 0; k < 6; ++k) {
    const long o = target + k;
    if (!track.closed() && o >= track.tau()) break;
    const int cp = track.checkpoint_of_ordinal(o);
    const Vec2 pos = track.checkpoints()[cp].pos;
    if (k > 0) dist += (pos - prev_pos).norm();
    prev_pos = pos;
    if (track.kind_of(cp) != SegmentKind::Curve) continue;
    const double cap = std::sqrt(p.lat_max * grip(wear, p) * track.curve_radius(cp));
    best = std::min(best, std::sqrt(cap * cap + 2.0 * p.a_max * dist));
  }
  return best;
}

class MctsLqngController final : public Controller {
 public:
  MctsLqngController(const RaceConfig& cfg, const TrackModel& track, std::uint64_t seed)
      : cfg_(cfg),
        track_(track),
        parts_(Partitions::defaults(cfg.vehicle)),
        options_(cfg.lqng),
        seed_(seed) {
    options_.dt = cfg.dt;
  }

  void replan(const KartState& ego, const KartState& opp, ReplayWriter& replay,
              int player) override {
    JointDiscrete joint;
    joint.p[0] = discretize(ego, track_, parts_);
    joint.p[1] = discretize(opp, track_, parts_);
    try {
      auto plan = std::make_shared<const WaypointPlan>(
          mcts_plan(joint, 0, ego.t, track_, cfg_.vehicle, parts_, cfg_.rules, cfg_.mcts,
                    derive_seed(seed_, static_cast<std::uint64_t>(plan_id_) + 1)));
      ++plan_id_;
      std::atomic_store(&plan_, plan);
      replay.plan(player, plan_id_, *plan);
    } catch (const EmptyActionSetError& e) {
      RACING_LOG(LogLevel::Warn, "planner: %s", e.what());
      ++fallbacks_;
    }
  }

  ControlInput control(const KartState& ego, const KartState& opp, ControlDiag* diag) override {
    const auto plan = std::atomic_load(&plan_);
    LqngDiagnostics d;
    const ControlInput u =
        lqng_control(ego, opp, plan.get(), cfg_.lq, cfg_.vehicle, options_, track_, &d);
    if (d.fallback) ++fallbacks_;
    if (diag) *diag = {d.rcond, d.fallback, d.stale_plan};
    return u;
  }

  const WaypointPlan* plan() const override {
    const auto plan = std::atomic_load(&plan_);
    return plan.get();
  }
  int plan_id() const override { return plan_id_; }
  int fallback_count() const override { return fallbacks_; }

 private:
  const RaceConfig& cfg_;
  const TrackModel& track_;
  Partitions parts_;
  LqngOptions options_;
  std::uint64_t seed_;
  std::shared_ptr<const WaypointPlan> plan_;
  int plan_id_ = 0;
  int fallbacks_ = 0;
};

class FixedLqngController final : public Controller {
 public:
  FixedLqngController(const RaceConfig& cfg, const TrackModel& track,
                      std::shared_ptr<const RacingLine> line)
      : cfg_(cfg), track_(track), line_(std::move(line)), options_(cfg.lqng) {
    options_.dt = cfg.dt;
  }

  ControlInput control(const KartState& ego, const KartState& opp, ControlDiag* diag) override {
    std::array<TargetWaypoint, 2> targets;
    targets[0] = next_fixed_waypoint(ego, *line_, track_);
    targets[1] = nearest_anchor_target(opp, track_, opp.v);
    LqngDiagnostics d;
    const ControlInput u =
        lqng_game_control(ego, opp, targets, cfg_.lq, cfg_.vehicle, options_, &d);
    if (d.fallback) ++fallbacks_;
    if (diag) *diag = {d.rcond, d.fallback, false};
    return u;
  }

  int fallback_count() const override { return fallbacks_; }

 private:
  const RaceConfig& cfg_;
  const TrackModel& track_;
  std::shared_ptr<const RacingLine> line_;
  LqngOptions options_;
  int fallbacks_ = 0;
};

class NearestAnchorLqrController final : public Controller {
 public:
  NearestAnchorLqrController(const RaceConfig& cfg, const TrackModel& track)
      : cfg_(cfg), track_(track), options_(cfg.lqng) {
    options_.dt = cfg.dt;
  }

  ControlInput control(const KartState& ego, const KartState& opp, ControlDiag* diag) override {
    const double speed = safe_speed_toward(track_, cfg_.vehicle,
                                           ego.progress.ordinal(track_.tau()), ego.wear,
                                           0.7 * cfg_.vehicle.v_max);
    const TargetWaypoint target = nearest_anchor_target(ego, track_, speed);
    if (diag) *diag = {};
    return tracking_lqr_control(ego, target, cfg_.lq, cfg_.vehicle, options_);
  }

 private:
  const RaceConfig& cfg_;
  const TrackModel& track_;
  LqngOptions options_;
};

}  // namespace

std::unique_ptr<Controller> make_controller(ControllerKind kind, const RaceConfig& cfg,
                                            const TrackModel& track,
                                            std::shared_ptr<const RacingLine> line,
                                            std::uint64_t seed) {
  switch (kind) {
    case ControllerKind::MctsLqng:
      return std::make_unique<MctsLqngController>(cfg, track, seed);
    case ControllerKind::FixedLqng:
      if (!line) throw ConfigError("fixed_lqng controller requires a racing line");
      return std::make_unique<FixedLqngController>(cfg, track, std::move(line));
    case ControllerKind::NearestAnchorLqr:
      return std::make_unique<NearestAnchorLqrController>(cfg, track);
  }
  throw ConfigError("unknown controller kind");
}

void PerfStats::merge(const PerfStats& o) {
  for (int p = 0; p < 2; ++p) {
    control_seconds[p].insert(control_seconds[p].end(), o.control_seconds[p].begin(),
                              o.control_seconds[p].end());
    plan_seconds[p].insert(plan_seconds[p].end(), o.plan_seconds[p].begin(),
                           o.plan_seconds[p].end());
  }
}

namespace {

// Progress, lane, section and counter caches re-derived after contact
// separation and wall clamping may have moved the stepped position.
void finalize_caches(const KartState& prev, KartState& next, const TrackModel& track,
                     const RuleConfig& rules) {
  next.progress = track.advance_progress(next.pos, prev.progress);
  next.last_cp_time = prev.last_cp_time;
  if (!(next.progress == prev.progress)) next.last_cp_time = next.t;
  next.lane = track.nearest_lane(track.project(next.pos).lateral);
  next.on_straight =
      track.kind_of(track.nearest_checkpoint(next.pos)) == SegmentKind::Straight;
  next.lane_changes = lane_counter_step(prev.on_straight, next.on_straight, prev.lane,
                                        next.lane, prev.lane_changes, rules.literal_lane_reset);
}

std::optional<PlanEntry> plan_entry_for(const WaypointPlan* plan, long ordinal) {
  if (!plan) return std::nullopt;
  for (const PlanEntry& e : plan->entries) {
    if (e.ego_cp == ordinal) return e;
  }
  return std::nullopt;
}

const char* outcome_name(RaceOutcome o) {
  switch (o) {
    case RaceOutcome::Player0: return "p0";
    case RaceOutcome::Player1: return "p1";
    case RaceOutcome::Draw: return "draw";
  }
  return "draw";
}

}  // namespace

RaceResult run_race_with_controllers(const RaceConfig& cfg, const TrackModel& track,
                                     std::array<Controller*, 2> controllers,
                                     std::array<int, 2> start_lanes, std::uint64_t seed,
                                     int race_index, bool record_replay) {
  cfg.validate();
  const int tau = track.tau();
  const long finish_ordinal =
      track.closed() ? static_cast<long>(cfg.laps) * tau : static_cast<long>(tau) - 1;

  std::array<KartState, 2> karts;
  for (int p = 0; p < 2; ++p) {
    const LaneAnchor a = track.lane_anchor(0, start_lanes[p]);
    karts[p].pos = a.pos;
    karts[p].heading = a.heading;
    karts[p].v = std::clamp(cfg.start_speed, 0.0, cfg.vehicle.v_max);
    karts[p].lane = start_lanes[p];
    karts[p].on_straight = track.kind_of(0) == SegmentKind::Straight;
  }

  RaceResult res;
  ReplayWriter replay(record_replay);
  replay.header(track, cfg.vehicle, cfg.rules, seed, race_index, cfg.dt, cfg.time_limit,
                cfg.laps, {controller_kind_name(cfg.players[0]),
                           controller_kind_name(cfg.players[1])},
                start_lanes);
  RulesTracker tracker(track, cfg.vehicle, cfg.rules);
  std::map<long, int> gate_passers;  // ordinal -> players already through

  const auto emit_tick = [&](int k, const std::array<ControlInput, 2>& controls,
                             std::array<bool, 2> offtrack, std::array<bool, 2> active) {
    for (const Violation& v : tracker.tick(karts[0], karts[1], offtrack, active)) {
      res.violations.push_back(v);
      replay.violation(v);
    }
    if (!replay.enabled()) return;
    std::array<double, 2> lidar_min = {cfg.vehicle.lidar_range, cfg.vehicle.lidar_range};
    std::array<std::array<LidarReading, kLidarRayCount>, 2> scans;
    for (int p = 0; p < 2; ++p) {
      scans[p] = lidar_scan(karts[p], karts[1 - p], track, cfg.vehicle);
      for (const LidarReading& r : scans[p]) lidar_min[p] = std::min(lidar_min[p], r.distance);
    }
    replay.tick(k, karts, controls, offtrack, active,
                lidar_min, {controllers[0]->plan_id(), controllers[1]->plan_id()});
    if (cfg.record_rewards) {
      for (int p = 0; p < 2; ++p) {
        if (!active[p]) continue;
        const int next_cp =
            track.checkpoint_of_ordinal(karts[p].progress.ordinal(tau) + 1);
        replay.step_reward(p, karts[p].t,
                           step_rewards(karts[p], scans[p], track.checkpoints()[next_cp].pos,
                                        cfg.rewards, cfg.vehicle, cfg.rules));
      }
    }
  };

  emit_tick(0, {}, {false, false}, {true, true});

  const int period_ticks = static_cast<int>(std::lround(cfg.high_level_period / cfg.dt));
  const int max_ticks = static_cast<int>(std::lround(cfg.time_limit / cfg.dt));
  std::array<bool, 2> wall_contact = {false, false};

  for (int k = 1; k <= max_ticks; ++k) {
    const std::array<bool, 2> active = {!karts[0].finish_time.has_value(),
                                        !karts[1].finish_time.has_value()};

    if ((k - 1) % period_ticks == 0) {
      for (int p = 0; p < 2; ++p) {
        const auto t0 = Clock::now();
        controllers[p]->replan(karts[p], karts[1 - p], replay, p);
        res.perf.plan_seconds[p].push_back(seconds_since(t0));
      }
    }

    std::array<ControlInput, 2> controls;
    for (int p = 0; p < 2; ++p) {
      const auto t0 = Clock::now();
      ControlDiag diag;
      controls[p] = controllers[p]->control(karts[p], karts[1 - p], &diag);
      res.perf.control_seconds[p].push_back(seconds_since(t0));
    }

    std::array<KartState, 2> next = {step(karts[0], controls[0], cfg.dt, cfg.vehicle, track),
                                     step(karts[1], controls[1], cfg.dt, cfg.vehicle, track)};

    // Hard contact: separate along the center axis, scrub 20% speed.
    if (boxes_overlap(kart_box(next[0], cfg.vehicle), kart_box(next[1], cfg.vehicle))) {
      Vec2 axis = next[1].pos - next[0].pos;
      const double d = axis.norm();
      const double reach = 2.0 * cfg.vehicle.kart_half_length;
      if (d > 1e-9) {
        axis = axis * (1.0 / d);
      } else {
        axis = heading_normal(next[0].heading);
      }
      const double push = 0.5 * std::max(0.0, reach - d) + 1e-3;
      next[0].pos = next[0].pos - axis * push;
      next[1].pos = next[1].pos + axis * push;
      next[0].v *= 0.8;
      next[1].v *= 0.8;
    }

    // Wall clamp: back onto the band edge, halving speed once per excursion.
    std::array<bool, 2> offtrack = {false, false};
    for (int p = 0; p < 2; ++p) {
      const CenterlineProjection proj = track.project(next[p].pos);
      if (proj.distance > track.width()) {
        offtrack[p] = true;
        const double scale = (track.width() - 1e-6) / proj.distance;
        next[p].pos = proj.closest + (next[p].pos - proj.closest) * scale;
        if (!wall_contact[p]) next[p].v *= 0.5;
      }
      wall_contact[p] = offtrack[p];
    }

    for (int p = 0; p < 2; ++p) {
      finalize_caches(karts[p], next[p], track, cfg.rules);
      if (active[p]) {
        for (long o = karts[p].ordinal(track) + 1; o <= next[p].ordinal(track); ++o) {
          PassageRecord rec;
          rec.player = p;
          rec.ordinal = o;
          rec.t = next[p].t;
          rec.order = ++gate_passers[o];
          rec.lane = next[p].lane;
          rec.speed = next[p].v;
          rec.pos = next[p].pos;
          rec.r_prev = karts[p].ordinal(track);
          rec.r_new = next[p].ordinal(track);
          if (const auto entry = plan_entry_for(controllers[p]->plan(), o)) {
            rec.target_lane = entry->ego_lane;
            rec.target_speed = entry->ego_speed;
            rec.target_pos =
                track.lane_anchor(track.checkpoint_of_ordinal(o), entry->ego_lane).pos;
          }
          res.passages.push_back(rec);
          replay.passage(rec);
          if (cfg.record_rewards && replay.enabled()) {
            replay.passage_reward(p, rec.t,
                                  checkpoint_rewards(rec, cfg.time_limit, cfg.rewards));
          }
        }
        if (!next[p].finish_time && next[p].ordinal(track) >= finish_ordinal) {
          next[p].finish_time = next[p].t;
        }
      }
    }

    karts = next;
    emit_tick(k, controls, offtrack, active);
    if (karts[0].finish_time && karts[1].finish_time) break;
  }

  res.finish_times = {karts[0].finish_time, karts[1].finish_time};
  res.final_ordinals = {karts[0].ordinal(track), karts[1].ordinal(track)};
  res.fallback_counts = {controllers[0]->fallback_count(), controllers[1]->fallback_count()};
  res.timeout = !(karts[0].finish_time && karts[1].finish_time);

  if (karts[0].finish_time && karts[1].finish_time) {
    if (*karts[0].finish_time < *karts[1].finish_time) {
      res.outcome = RaceOutcome::Player0;
    } else if (*karts[1].finish_time < *karts[0].finish_time) {
      res.outcome = RaceOutcome::Player1;
    } else {
      res.outcome = RaceOutcome::Draw;
    }
  } else {
    // Timeout: checkpoint progress decides, then the earlier time state.
    if (res.final_ordinals[0] != res.final_ordinals[1]) {
      res.outcome = res.final_ordinals[0] > res.final_ordinals[1] ? RaceOutcome::Player0
                                                                  : RaceOutcome::Player1;
    } else if (karts[0].last_cp_time != karts[1].last_cp_time) {
      res.outcome = karts[0].last_cp_time < karts[1].last_cp_time ? RaceOutcome::Player0
                                                                  : RaceOutcome::Player1;
    } else {
      res.outcome = RaceOutcome::Draw;
    }
  }

  replay.result(outcome_name(res.outcome), res.timeout, res.finish_times, res.fallback_counts);
  res.replay = replay.text();
  return res;
}

RaceResult run_race(const RaceConfig& cfg, const TrackModel& track,
                    std::shared_ptr<const RacingLine> line, std::uint64_t seed,
                    std::array<int, 2> start_lanes, int race_index, bool record_replay) {
  std::array<std::unique_ptr<Controller>, 2> owned;
  for (int p = 0; p < 2; ++p) {
    owned[p] = make_controller(cfg.players[p], cfg, track, line,
                               derive_seed(seed, static_cast<std::uint64_t>(p)));
  }
  return run_race_with_controllers(cfg, track, {owned[0].get(), owned[1].get()}, start_lanes,
                                   seed, race_index, record_replay);
}

namespace {

struct MetricsFold {
  std::array<int, 2> wins = {0, 0};
  int draws = 0;
  int races = 0;
  std::array<long, 2> collisions = {0, 0};
  std::array<long, 2> illegal_changes = {0, 0};
  std::array<double, 2> lane_dist_sum = {0.0, 0.0};
  std::array<long, 2> lane_dist_count = {0, 0};
  std::array<double, 2> vel_diff_sum = {0.0, 0.0};
  std::array<long, 2> vel_diff_count = {0, 0};

  void add_race(RaceOutcome outcome, const std::vector<Violation>& violations,
                const std::vector<PassageRecord>& passages, const TrackModel& track) {
    ++races;
    if (outcome == RaceOutcome::Player0) ++wins[0];
    else if (outcome == RaceOutcome::Player1) ++wins[1];
    else ++draws;
    for (const Violation& v : violations) {
      if (v.kind == ViolationKind::CollisionAtFault) ++collisions[v.player];
      if (v.kind == ViolationKind::IllegalLaneChange) ++illegal_changes[v.player];
    }
    for (const PassageRecord& p : passages) {
      if (!p.target_lane) continue;
      const double lateral = track.project(p.pos).lateral;
      const double target_lateral = track.lane_offsets()[*p.target_lane];
      lane_dist_sum[p.player] += std::abs(lateral - target_lateral) / track.lane_spacing();
      ++lane_dist_count[p.player];
      if (p.target_speed) {
        vel_diff_sum[p.player] += std::abs(p.speed - *p.target_speed);
        ++vel_diff_count[p.player];
      }
    }
  }

  void fill(SeriesResult& out) const {
    out.races = races;
    out.draws = draws;
    for (int p = 0; p < 2; ++p) {
      PlayerMetrics& m = out.metrics[p];
      m.wins = wins[p];
      m.avg_collisions_at_fault = races ? static_cast<double>(collisions[p]) / races : 0.0;
      m.avg_illegal_lane_changes = races ? static_cast<double>(illegal_changes[p]) / races : 0.0;
      m.safety_score = m.avg_collisions_at_fault + m.avg_illegal_lane_changes;
      if (lane_dist_count[p] > 0) {
        m.avg_target_lane_distance = lane_dist_sum[p] / lane_dist_count[p];
      }
      if (vel_diff_count[p] > 0) {
        m.avg_target_velocity_diff = vel_diff_sum[p] / vel_diff_count[p];
      }
    }
  }
};

}  // namespace

SeriesResult run_series(const RaceConfig& cfg, const TrackModel& track, bool record_replays) {
  cfg.validate();
  std::shared_ptr<const RacingLine> line;
  if (cfg.players[0] == ControllerKind::FixedLqng || cfg.players[1] == ControllerKind::FixedLqng) {
    line = std::make_shared<const RacingLine>(load_or_compute_racing_line(
        track, cfg.vehicle, cfg.racing_line_cache, cfg.racing_line_iterations));
  }

  SeriesResult out;
  MetricsFold fold;
  const std::array<int, 2> base_lanes = {0, track.lane_count() - 1};
  for (int i = 0; i < cfg.series_size; ++i) {
    const std::array<int, 2> lanes =
        i % 2 == 0 ? base_lanes : std::array<int, 2>{base_lanes[1], base_lanes[0]};
    RaceResult r = run_race(cfg, track, line, derive_seed(cfg.seed, static_cast<std::uint64_t>(i)),
                            lanes, i, record_replays);
    fold.add_race(r.outcome, r.violations, r.passages, track);
    out.perf.merge(r.perf);
    r.perf = PerfStats{};
    out.results.push_back(std::move(r));
  }
  fold.fill(out);
  return out;
}

SeriesResult aggregate_replays(const std::vector<Replay>& replays) {
  SeriesResult out;
  MetricsFold fold;
  for (const Replay& r : replays) {
    RaceOutcome outcome = RaceOutcome::Draw;
    if (r.outcome == "p0") outcome = RaceOutcome::Player0;
    if (r.outcome == "p1") outcome = RaceOutcome::Player1;
    fold.add_race(outcome, r.violations, r.passages, *r.track);
  }
  fold.fill(out);
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

std::string metrics_csv(const std::string& track_name,
                        const std::array<std::string, 2>& player_names,
                        const SeriesResult& series) {
  std::string csv =
      "track,p0_controller,p1_controller,races,p0_wins,p1_wins,draws,"
      "p0_avg_collisions_at_fault,p1_avg_collisions_at_fault,"
      "p0_avg_illegal_lane_changes,p1_avg_illegal_lane_changes,"
      "p0_safety_score,p1_safety_score,"
      "p0_avg_target_lane_distance,p1_avg_target_lane_distance,"
      "p0_avg_target_velocity_diff,p1_avg_target_velocity_diff\n";
  const auto& m = series.metrics;
  csv += track_name + "," + player_names[0] + "," + player_names[1] + "," +
         std::to_string(series.races) + "," + std::to_string(m[0].wins) + "," +
         std::to_string(m[1].wins) + "," + std::to_string(series.draws) + "," +
         fmt(m[0].avg_collisions_at_fault) + "," + fmt(m[1].avg_collisions_at_fault) + "," +
         fmt(m[0].avg_illegal_lane_changes) + "," + fmt(m[1].avg_illegal_lane_changes) + "," +
         fmt(m[0].safety_score) + "," + fmt(m[1].safety_score) + "," +
         fmt_opt(m[0].avg_target_lane_distance) + "," + fmt_opt(m[1].avg_target_lane_distance) +
         "," + fmt_opt(m[0].avg_target_velocity_diff) + "," +
         fmt_opt(m[1].avg_target_velocity_diff) + "\n";
  return csv;
}

void write_series_outputs(const std::string& track_name,
                          const std::array<std::string, 2>& player_names,
                          const SeriesResult& series, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < series.results.size(); ++i) {
    if (series.results[i].replay.empty()) continue;
    char name[32];
    std::snprintf(name, sizeof name, "race_%04zu.jsonl", i);
    std::ofstream out(std::filesystem::path(out_dir) / name, std::ios::binary);
    out << series.results[i].replay;
  }
  std::ofstream csv(std::filesystem::path(out_dir) / "metrics.csv", std::ios::binary);
  csv << metrics_csv(track_name, player_names, series);
}

}  // namespace racing
