#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "racing/errors.hpp"
#include "racing/race.hpp"

namespace racing {

using nlohmann::json;

namespace {

// Pulls known keys out of an object and rejects any leftovers.
class StrictObject {
 public:
  StrictObject(const json& j, std::string scope) : j_(j), scope_(std::move(scope)) {
    if (!j.is_object()) throw ConfigError(scope_ + ": expected an object");
  }

  ~StrictObject() = default;

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(scope_ + "." + key + ": wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(scope_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string scope_;
  std::set<std::string> seen_;
};

void parse_vehicle(const json& j, VehicleParams& p) {
  StrictObject o(j, "vehicle");
  o.get("v_max", p.v_max);
  o.get("a_max", p.a_max);
  o.get("e_max", p.e_max);
  o.get("lat_max", p.lat_max);
  o.get("wear_rate", p.wear_rate);
  o.get("grip_floor", p.grip_floor);
  o.get("kart_half_length", p.kart_half_length);
  o.get("kart_half_width", p.kart_half_width);
  o.get("nose_offset", p.nose_offset);
  o.get("lidar_range", p.lidar_range);
  o.finish();
}

void parse_rules(const json& j, RuleConfig& r) {
  StrictObject o(j, "rules");
  o.get("min_gap_side", r.min_gap_side);
  o.get("min_gap_behind", r.min_gap_behind);
  o.get("lane_change_limit", r.lane_change_limit);
  o.get("behind_cone_half_angle", r.behind_cone_half_angle);
  o.get("collision_time_threshold", r.collision_time_threshold);
  o.get("literal_lane_reset", r.literal_lane_reset);
  o.finish();
}

void parse_lq(const json& j, LqWeights& w, LqngOptions& opt) {
  StrictObject o(j, "lq");
  o.get("track_pos", w.track_pos);
  o.get("track_vel", w.track_vel);
  o.get("track_heading", w.track_heading);
  o.get("opp_waypoint", w.opp_waypoint);
  o.get("collision", w.collision);
  o.get("r_accel", w.r_accel);
  o.get("r_yaw", w.r_yaw);
  o.get("horizon_seconds", opt.horizon_seconds);
  o.get("engage_radius", opt.engage_radius);
  o.get("stale_after", opt.stale_after);
  o.finish();
}

void parse_mcts(const json& j, MctsConfig& m) {
  StrictObject o(j, "mcts");
  o.get("horizon", m.horizon);
  o.get("iterations", m.iterations);
  o.get("c_uct", m.c_uct);
  o.get("stuck_time_penalty", m.stuck_time_penalty);
  o.finish();
}

void parse_rewards(const json& j, RewardWeights& w) {
  StrictObject o(j, "rewards");
  o.get("speed", w.speed);
  o.get("direction", w.direction);
  o.get("swerve", w.swerve);
  o.get("wall_hit", w.wall_hit);
  o.get("player_hit", w.player_hit);
  o.get("player_hit_front", w.player_hit_front);
  o.get("checkpoint_base", w.checkpoint_base);
  o.get("checkpoint_time", w.checkpoint_time);
  o.get("target_lane", w.target_lane);
  o.get("target_velocity", w.target_velocity);
  o.get("reverse", w.reverse);
  o.get("proximity_threshold", w.proximity_threshold);
  o.get("alpha", w.alpha);
  o.get("per_tick_waypoint_error", w.per_tick_waypoint_error);
  o.finish();
}

}  // namespace

RaceConfig parse_race_config(const std::string& json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  RaceConfig cfg;
  StrictObject o(j, "config");

  std::string track;
  o.get("track", track);
  if (track.empty()) throw ConfigError("config: 'track' is required");
  std::filesystem::path p(track);
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  cfg.track_path = p.string();

  o.get("laps", cfg.laps);
  o.get("dt", cfg.dt);
  o.get("high_level_period", cfg.high_level_period);
  o.get("time_limit", cfg.time_limit);
  o.get("start_speed", cfg.start_speed);
  o.get("series_size", cfg.series_size);
  o.get("seed", cfg.seed);
  o.get("record_rewards", cfg.record_rewards);
  o.get("racing_line_iterations", cfg.racing_line_iterations);

  std::string cache;
  o.get("racing_line_cache", cache);
  if (!cache.empty()) {
    std::filesystem::path cp(cache);
    if (cp.is_relative() && !base_dir.empty()) cp = std::filesystem::path(base_dir) / cp;
    cfg.racing_line_cache = cp.string();
  }

  if (const json* players = o.child("players")) {
    if (!players->is_array() || players->size() != 2) {
      throw ConfigError("config.players: expected exactly 2 controller names");
    }
    cfg.players = {controller_kind_from_name((*players)[0].get<std::string>()),
                   controller_kind_from_name((*players)[1].get<std::string>())};
  }
  if (const json* vehicle = o.child("vehicle")) parse_vehicle(*vehicle, cfg.vehicle);
  if (const json* rules = o.child("rules")) parse_rules(*rules, cfg.rules);
  if (const json* lq = o.child("lq")) parse_lq(*lq, cfg.lq, cfg.lqng);
  if (const json* mcts = o.child("mcts")) parse_mcts(*mcts, cfg.mcts);
  if (const json* rewards = o.child("rewards")) parse_rewards(*rewards, cfg.rewards);
  o.finish();

  cfg.lqng.dt = cfg.dt;
  cfg.validate();
  return cfg;
}

RaceConfig load_race_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_race_config(buf.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace racing
