#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "racing/lqng.hpp"
#include "racing/track.hpp"
#include "racing/vehicle.hpp"

namespace racing {

// Offline-optimized fixed line: one target pose and speed per checkpoint.
struct RacingLine {
  std::vector<Vec2> points;
  std::vector<double> headings;
  std::vector<double> speeds;
  std::uint64_t track_hash = 0;
  int iterations_used = 0;
  double curvature_cost = 0.0;

  TargetWaypoint waypoint(int checkpoint) const {
    return {points[checkpoint], speeds[checkpoint], headings[checkpoint]};
  }
};

// Minimum-curvature lateral-offset optimization by coordinate descent with
// golden-section line search; offsets bounded to the track minus a kart
// margin. Speeds come from the curve caps with a backward braking pass
// (v_k^2 - v_{k+1}^2 <= 2 a_max d_k). Deterministic for fixed inputs.
RacingLine compute_racing_line(const TrackModel& track, const VehicleParams& params,
                               int max_iterations = 200, std::uint64_t seed = 0);

// Line entry for the checkpoint after the kart's progress (wraps when closed).
TargetWaypoint next_fixed_waypoint(const KartState& state, const RacingLine& line,
                                   const TrackModel& track);

// Cache keyed by the track content hash; recomputes on mismatch.
RacingLine load_or_compute_racing_line(const TrackModel& track, const VehicleParams& params,
                                       const std::string& cache_path, int max_iterations = 200);

std::string serialize_racing_line(const RacingLine& line);
RacingLine parse_racing_line(const std::string& text);

}  // namespace racing
