#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "racing/errors.hpp"
#include "racing/race.hpp"

namespace fs = std::filesystem;
using namespace racing;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string track_name(const std::string& path) {
  return fs::path(path).stem().string();
}

void print_metrics(const std::array<std::string, 2>& names, const SeriesResult& series) {
  std::printf("races: %d (draws %d)\n", series.races, series.draws);
  for (int p = 0; p < 2; ++p) {
    const PlayerMetrics& m = series.metrics[p];
    std::printf("p%d %-18s wins %3d  collisions-at-fault/race %.3f  "
                "illegal-lane-changes/race %.3f  safety %.3f",
                p, names[p].c_str(), m.wins, m.avg_collisions_at_fault,
                m.avg_illegal_lane_changes, m.safety_score);
    if (m.avg_target_lane_distance) {
      std::printf("  lane-dist %.3f  vel-diff %.3f", *m.avg_target_lane_distance,
                  *m.avg_target_velocity_diff);
    }
    std::printf("\n");
  }
}

int cmd_run(const std::string& config_path, std::uint64_t seed, bool have_seed,
            const std::string& out_dir) {
  RaceConfig cfg = load_race_config(config_path);
  if (have_seed) cfg.seed = seed;
  const TrackModel track = TrackModel::load(cfg.track_path);

  std::shared_ptr<const RacingLine> line;
  if (cfg.players[0] == ControllerKind::FixedLqng ||
      cfg.players[1] == ControllerKind::FixedLqng) {
    line = std::make_shared<const RacingLine>(load_or_compute_racing_line(
        track, cfg.vehicle, cfg.racing_line_cache, cfg.racing_line_iterations));
  }

  const RaceResult r =
      run_race(cfg, track, line, cfg.seed, {0, track.lane_count() - 1}, 0, true);

  fs::create_directories(out_dir);
  const fs::path replay_path = fs::path(out_dir) / "race_0000.jsonl";
  std::ofstream out(replay_path, std::ios::binary);
  out << r.replay;

  const char* outcome = r.outcome == RaceOutcome::Player0   ? "p0"
                        : r.outcome == RaceOutcome::Player1 ? "p1"
                                                            : "draw";
  std::printf("outcome: %s%s\n", outcome, r.timeout ? " (timeout)" : "");
  for (int p = 0; p < 2; ++p) {
    if (r.finish_times[p]) {
      std::printf("p%d finish: %.2f s\n", p, *r.finish_times[p]);
    } else {
      std::printf("p%d finish: dnf (progress %ld)\n", p, r.final_ordinals[p]);
    }
  }
  std::printf("violations: %zu\nreplay: %s\n", r.violations.size(),
              replay_path.string().c_str());
  return 0;
}

int cmd_series(const std::string& config_path, const std::string& out_dir) {
  const RaceConfig cfg = load_race_config(config_path);
  const TrackModel track = TrackModel::load(cfg.track_path);
  const SeriesResult series = run_series(cfg, track, true);

  const std::array<std::string, 2> names = {controller_kind_name(cfg.players[0]),
                                            controller_kind_name(cfg.players[1])};
  write_series_outputs(track_name(cfg.track_path), names, series, out_dir);
  print_metrics(names, series);
  std::printf("outputs: %s\n", out_dir.c_str());
  return 0;
}

int cmd_rescore(const std::string& replay_path, bool rewards) {
  const Replay replay = parse_replay(read_file(replay_path));
  const RescoreResult rs = rescore(replay, replay.rules, RewardWeights{});

  std::printf("ticks: %zu  recorded violations: %zu  re-derived: %zu  match: %s\n",
              replay.ticks.size(), replay.violations.size(), rs.violations.size(),
              rs.violations_match ? "yes" : "NO");
  for (const Violation& v : rs.violations) {
    std::printf("  t=%.2f player=%d %s\n", v.time, v.player, violation_kind_name(v.kind));
  }
  if (rewards) {
    for (int p = 0; p < 2; ++p) {
      std::printf("p%d reward total: %.6f%s\n", p, rs.rewards[p].total(),
                  replay.recorded_rewards[p]
                      ? (rs.rewards_match[p] ? " (matches recorded)" : " (MISMATCH)")
                      : "");
    }
  }
  return rs.violations_match ? 0 : 1;
}

int cmd_metrics(const std::string& in_dir, const std::string& csv_path) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ParseError("no .jsonl replays under " + in_dir);

  std::vector<Replay> replays;
  for (const std::string& f : files) replays.push_back(parse_replay(read_file(f)));
  const SeriesResult series = aggregate_replays(replays);

  const std::array<std::string, 2> names = {replays.front().players[0],
                                            replays.front().players[1]};
  std::ofstream out(csv_path, std::ios::binary);
  out << metrics_csv("replays", names, series);
  print_metrics(names, series);
  std::printf("csv: %s\n", csv_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"head-to-head kart racing simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", replay_path, in_dir, csv_path = "metrics.csv";
  std::uint64_t seed = 0;
  bool rewards = false;

  CLI::App* run = app.add_subcommand("run", "run a single race");
  run->add_option("--config", config_path, "race config (json)")->required();
  CLI::Option* seed_opt = run->add_option("--seed", seed, "override the config seed");
  run->add_option("--out", out_dir, "output directory");

  CLI::App* series = app.add_subcommand("series", "run a full race series");
  series->add_option("--config", config_path, "race config (json)")->required();
  series->add_option("--out", out_dir, "output directory");

  CLI::App* rescore_cmd = app.add_subcommand("rescore", "re-derive violations from a replay");
  rescore_cmd->add_option("--replay", replay_path, "replay document (jsonl)")->required();
  rescore_cmd->add_flag("--rewards", rewards, "also print reward totals");

  CLI::App* metrics_cmd = app.add_subcommand("metrics", "aggregate replays into a CSV");
  metrics_cmd->add_option("--in", in_dir, "directory of replay documents")->required();
  metrics_cmd->add_option("--csv", csv_path, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, seed_opt->count() > 0, out_dir);
    if (series->parsed()) return cmd_series(config_path, out_dir);
    if (rescore_cmd->parsed()) return cmd_rescore(replay_path, rewards);
    if (metrics_cmd->parsed()) return cmd_metrics(in_dir, csv_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
