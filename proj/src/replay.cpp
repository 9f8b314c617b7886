#include "racing/replay.hpp"

#include <json.hpp>

#include "racing/errors.hpp"

namespace racing {

using nlohmann::json;

namespace {

json kart_to_json(const KartState& k) {
  json j;
  j["x"] = k.pos.x;
  j["y"] = k.pos.y;
  j["v"] = k.v;
  j["th"] = k.heading;
  j["wear"] = k.wear;
  j["lap"] = k.progress.lap;
  j["cp"] = k.progress.checkpoint;
  j["lane"] = k.lane;
  j["straight"] = k.on_straight;
  j["l"] = k.lane_changes;
  j["t"] = k.t;
  j["cp_t"] = k.last_cp_time;
  if (k.finish_time) j["gamma"] = *k.finish_time;
  return j;
}

KartState kart_from_json(const json& j) {
  KartState k;
  k.pos = {j.at("x").get<double>(), j.at("y").get<double>()};
  k.v = j.at("v").get<double>();
  k.heading = j.at("th").get<double>();
  k.wear = j.at("wear").get<double>();
  k.progress.lap = j.at("lap").get<int>();
  k.progress.checkpoint = j.at("cp").get<int>();
  k.lane = j.at("lane").get<int>();
  k.on_straight = j.at("straight").get<bool>();
  k.lane_changes = j.at("l").get<int>();
  k.t = j.at("t").get<double>();
  k.last_cp_time = j.at("cp_t").get<double>();
  if (j.contains("gamma")) k.finish_time = j.at("gamma").get<double>();
  return k;
}

json rules_to_json(const RuleConfig& r) {
  json j;
  j["min_gap_side"] = r.min_gap_side;
  j["min_gap_behind"] = r.min_gap_behind;
  j["lane_change_limit"] = r.lane_change_limit;
  j["behind_cone_half_angle"] = r.behind_cone_half_angle;
  j["collision_time_threshold"] = r.collision_time_threshold;
  j["literal_lane_reset"] = r.literal_lane_reset;
  return j;
}

RuleConfig rules_from_json(const json& j) {
  RuleConfig r;
  r.min_gap_side = j.at("min_gap_side").get<double>();
  r.min_gap_behind = j.at("min_gap_behind").get<double>();
  r.lane_change_limit = j.at("lane_change_limit").get<int>();
  r.behind_cone_half_angle = j.at("behind_cone_half_angle").get<double>();
  r.collision_time_threshold = j.at("collision_time_threshold").get<double>();
  r.literal_lane_reset = j.at("literal_lane_reset").get<bool>();
  return r;
}

json vehicle_to_json(const VehicleParams& p) {
  json j;
  j["v_max"] = p.v_max;
  j["a_max"] = p.a_max;
  j["e_max"] = p.e_max;
  j["lat_max"] = p.lat_max;
  j["wear_rate"] = p.wear_rate;
  j["grip_floor"] = p.grip_floor;
  j["kart_half_length"] = p.kart_half_length;
  j["kart_half_width"] = p.kart_half_width;
  j["nose_offset"] = p.nose_offset;
  j["lidar_range"] = p.lidar_range;
  return j;
}

VehicleParams vehicle_from_json(const json& j) {
  VehicleParams p;
  p.v_max = j.at("v_max").get<double>();
  p.a_max = j.at("a_max").get<double>();
  p.e_max = j.at("e_max").get<double>();
  p.lat_max = j.at("lat_max").get<double>();
  p.wear_rate = j.at("wear_rate").get<double>();
  p.grip_floor = j.at("grip_floor").get<double>();
  p.kart_half_length = j.at("kart_half_length").get<double>();
  p.kart_half_width = j.at("kart_half_width").get<double>();
  p.nose_offset = j.at("nose_offset").get<double>();
  p.lidar_range = j.at("lidar_range").get<double>();
  return p;
}

json reward_to_json(const RewardBreakdown& r) {
  json j;
  j["speed"] = r.speed;
  j["direction"] = r.direction;
  j["swerve"] = r.swerve;
  j["wall_hit"] = r.wall_hit;
  j["player_hit"] = r.player_hit;
  j["checkpoint_base"] = r.checkpoint_base;
  j["checkpoint_time"] = r.checkpoint_time;
  j["target"] = r.target;
  j["reverse"] = r.reverse;
  j["total"] = r.total();
  return j;
}

RewardBreakdown reward_from_json(const json& j) {
  RewardBreakdown r;
  r.speed = j.at("speed").get<double>();
  r.direction = j.at("direction").get<double>();
  r.swerve = j.at("swerve").get<double>();
  r.wall_hit = j.at("wall_hit").get<double>();
  r.player_hit = j.at("player_hit").get<double>();
  r.checkpoint_base = j.at("checkpoint_base").get<double>();
  r.checkpoint_time = j.at("checkpoint_time").get<double>();
  r.target = j.at("target").get<double>();
  r.reverse = j.at("reverse").get<double>();
  return r;
}

}  // namespace

void ReplayWriter::append(const std::string& line) {
  if (!enabled_) return;
  text_ += line;
  text_ += '\n';
}

void ReplayWriter::header(const TrackModel& track, const VehicleParams& vehicle,
                          const RuleConfig& rules, std::uint64_t seed, int race_index,
                          double dt, double time_limit, int laps,
                          const std::array<std::string, 2>& players,
                          const std::array<int, 2>& start_lanes) {
  if (!enabled_) return;
  json j;
  j["type"] = "header";
  j["format"] = 1;
  j["track"] = track.serialize();
  j["track_hash"] = track.content_hash();
  j["vehicle"] = vehicle_to_json(vehicle);
  j["rules"] = rules_to_json(rules);
  j["seed"] = seed;
  j["race_index"] = race_index;
  j["dt"] = dt;
  j["time_limit"] = time_limit;
  j["laps"] = laps;
  j["players"] = {players[0], players[1]};
  j["start_lanes"] = {start_lanes[0], start_lanes[1]};
  append(j.dump());
}

void ReplayWriter::tick(int k, const std::array<KartState, 2>& karts,
                        const std::array<ControlInput, 2>& controls,
                        const std::array<bool, 2>& offtrack, const std::array<bool, 2>& active,
                        const std::array<double, 2>& lidar_min,
                        const std::array<int, 2>& plan_ids) {
  if (!enabled_) return;
  json j;
  j["type"] = "tick";
  j["k"] = k;
  j["karts"] = {kart_to_json(karts[0]), kart_to_json(karts[1])};
  j["controls"] = {{controls[0].accel, controls[0].yaw_rate},
                   {controls[1].accel, controls[1].yaw_rate}};
  j["offtrack"] = {offtrack[0], offtrack[1]};
  j["active"] = {active[0], active[1]};
  j["lidar_min"] = {lidar_min[0], lidar_min[1]};
  j["plan_ids"] = {plan_ids[0], plan_ids[1]};
  append(j.dump());
}

void ReplayWriter::plan(int player, int plan_id, const WaypointPlan& p) {
  if (!enabled_) return;
  json entries = json::array();
  for (const PlanEntry& e : p.entries) {
    entries.push_back({e.ego_cp, e.ego_lane, e.ego_speed, e.opp_cp, e.opp_lane, e.opp_speed});
  }
  json j;
  j["type"] = "plan";
  j["player"] = player;
  j["plan_id"] = plan_id;
  j["epoch"] = p.epoch;
  j["entries"] = std::move(entries);
  append(j.dump());
}

void ReplayWriter::violation(const Violation& v) {
  if (!enabled_) return;
  json j;
  j["type"] = "violation";
  j["kind"] = violation_kind_name(v.kind);
  j["player"] = v.player;
  j["t"] = v.time;
  append(j.dump());
}

void ReplayWriter::passage(const PassageRecord& p) {
  if (!enabled_) return;
  json j;
  j["type"] = "passage";
  j["player"] = p.player;
  j["ordinal"] = p.ordinal;
  j["t"] = p.t;
  j["order"] = p.order;
  j["lane"] = p.lane;
  j["v"] = p.speed;
  j["x"] = p.pos.x;
  j["y"] = p.pos.y;
  j["r_prev"] = p.r_prev;
  j["r_new"] = p.r_new;
  if (p.target_lane) j["target_lane"] = *p.target_lane;
  if (p.target_speed) j["target_v"] = *p.target_speed;
  if (p.target_pos) {
    j["target_x"] = p.target_pos->x;
    j["target_y"] = p.target_pos->y;
  }
  append(j.dump());
}

void ReplayWriter::step_reward(int player, double t, const RewardBreakdown& r) {
  if (!enabled_) return;
  json j;
  j["type"] = "step_reward";
  j["player"] = player;
  j["t"] = t;
  j["components"] = reward_to_json(r);
  append(j.dump());
}

void ReplayWriter::passage_reward(int player, double t, const RewardBreakdown& r) {
  if (!enabled_) return;
  json j;
  j["type"] = "passage_reward";
  j["player"] = player;
  j["t"] = t;
  j["components"] = reward_to_json(r);
  append(j.dump());
}

void ReplayWriter::result(const std::string& outcome, bool timeout,
                          const std::array<std::optional<double>, 2>& finish_times,
                          const std::array<int, 2>& fallback_counts) {
  if (!enabled_) return;
  json j;
  j["type"] = "result";
  j["outcome"] = outcome;
  j["timeout"] = timeout;
  j["finish"] = json::array();
  for (const auto& f : finish_times) {
    if (f) {
      j["finish"].push_back(*f);
    } else {
      j["finish"].push_back(nullptr);
    }
  }
  j["fallbacks"] = {fallback_counts[0], fallback_counts[1]};
  append(j.dump());
}

Replay parse_replay(const std::string& text) {
  Replay out;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("replay: malformed record: ") + e.what());
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "header") {
      out.track = std::make_shared<TrackModel>(TrackModel::parse(j.at("track").get<std::string>()));
      out.vehicle = vehicle_from_json(j.at("vehicle"));
      out.rules = rules_from_json(j.at("rules"));
      out.seed = j.at("seed").get<std::uint64_t>();
      out.race_index = j.at("race_index").get<int>();
      out.dt = j.at("dt").get<double>();
      out.time_limit = j.at("time_limit").get<double>();
      out.laps = j.at("laps").get<int>();
      out.players = {j.at("players")[0].get<std::string>(), j.at("players")[1].get<std::string>()};
      out.start_lanes = {j.at("start_lanes")[0].get<int>(), j.at("start_lanes")[1].get<int>()};
      have_header = true;
    } else if (type == "tick") {
      ReplayTick t;
      t.k = j.at("k").get<int>();
      t.karts = {kart_from_json(j.at("karts")[0]), kart_from_json(j.at("karts")[1])};
      t.controls = {ControlInput{j.at("controls")[0][0].get<double>(),
                                 j.at("controls")[0][1].get<double>()},
                    ControlInput{j.at("controls")[1][0].get<double>(),
                                 j.at("controls")[1][1].get<double>()}};
      t.offtrack = {j.at("offtrack")[0].get<bool>(), j.at("offtrack")[1].get<bool>()};
      t.active = {j.at("active")[0].get<bool>(), j.at("active")[1].get<bool>()};
      out.ticks.push_back(std::move(t));
    } else if (type == "violation") {
      out.violations.push_back({violation_kind_from_name(j.at("kind").get<std::string>()),
                                j.at("player").get<int>(), j.at("t").get<double>()});
    } else if (type == "passage") {
      PassageRecord p;
      p.player = j.at("player").get<int>();
      p.ordinal = j.at("ordinal").get<long>();
      p.t = j.at("t").get<double>();
      p.order = j.at("order").get<int>();
      p.lane = j.at("lane").get<int>();
      p.speed = j.at("v").get<double>();
      p.pos = {j.at("x").get<double>(), j.at("y").get<double>()};
      p.r_prev = j.at("r_prev").get<long>();
      p.r_new = j.at("r_new").get<long>();
      if (j.contains("target_lane")) p.target_lane = j.at("target_lane").get<int>();
      if (j.contains("target_v")) p.target_speed = j.at("target_v").get<double>();
      if (j.contains("target_x")) {
        p.target_pos = Vec2{j.at("target_x").get<double>(), j.at("target_y").get<double>()};
      }
      out.passages.push_back(std::move(p));
    } else if (type == "plan") {
      WaypointPlan p;
      p.ego = j.at("player").get<int>();
      p.epoch = j.at("epoch").get<double>();
      for (const auto& e : j.at("entries")) {
        p.entries.push_back({e[0].get<long>(), e[1].get<int>(), e[2].get<double>(),
                             e[3].get<long>(), e[4].get<int>(), e[5].get<double>()});
      }
      out.plans.emplace_back(j.at("plan_id").get<int>(), std::move(p));
    } else if (type == "step_reward" || type == "passage_reward") {
      const int player = j.at("player").get<int>();
      if (!out.recorded_rewards[player]) out.recorded_rewards[player] = RewardBreakdown{};
      *out.recorded_rewards[player] += reward_from_json(j.at("components"));
    } else if (type == "result") {
      out.outcome = j.at("outcome").get<std::string>();
      out.timeout = j.at("timeout").get<bool>();
      for (int i = 0; i < 2; ++i) {
        if (!j.at("finish")[i].is_null()) out.finish_times[i] = j.at("finish")[i].get<double>();
      }
    } else {
      throw ParseError("replay: unknown record type '" + type + "'");
    }
  }
  if (!have_header) throw ParseError("replay: missing header record");
  return out;
}

RescoreResult rescore(const Replay& replay, const RuleConfig& rules,
                      const RewardWeights& weights) {
  RescoreResult out;
  const TrackModel& track = *replay.track;
  RulesTracker tracker(track, replay.vehicle, rules);
  for (const ReplayTick& t : replay.ticks) {
    tracker.tick(t.karts[0], t.karts[1], t.offtrack, t.active);

    for (int p = 0; p < 2; ++p) {
      if (!t.active[p]) continue;
      const auto lidar = lidar_scan(t.karts[p], t.karts[1 - p], track, replay.vehicle);
      const int next_cp =
          track.checkpoint_of_ordinal(t.karts[p].progress.ordinal(track.tau()) + 1);
      out.rewards[p] += step_rewards(t.karts[p], lidar, track.checkpoints()[next_cp].pos,
                                     weights, replay.vehicle, rules);
    }
  }
  for (const PassageRecord& p : replay.passages) {
    out.rewards[p.player] += checkpoint_rewards(p, replay.time_limit, weights);
  }

  out.violations = tracker.violations();
  out.violations_match = out.violations.size() == replay.violations.size();
  if (out.violations_match) {
    for (std::size_t i = 0; i < out.violations.size(); ++i) {
      const Violation& a = out.violations[i];
      const Violation& b = replay.violations[i];
      if (a.kind != b.kind || a.player != b.player || a.time != b.time) {
        out.violations_match = false;
        break;
      }
    }
  }
  for (int p = 0; p < 2; ++p) {
    if (replay.recorded_rewards[p]) {
      out.rewards_match[p] =
          std::abs(out.rewards[p].total() - replay.recorded_rewards[p]->total()) < 1e-9;
    }
  }
  return out;
}

}  // namespace racing
