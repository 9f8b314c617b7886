#pragma once

#include <array>
#include <optional>

#include "racing/geometry.hpp"
#include "racing/track.hpp"

namespace racing {

struct VehicleParams {
  double v_max = 25.0;       // m/s
  double a_max = 8.0;        // m/s^2
  double e_max = 2.0;        // rad/s
  double lat_max = 12.0;     // m/s^2, lateral acceleration limit at full grip
  double wear_rate = 0.04;   // kappa, 1/rad of accumulated yaw
  double grip_floor = 0.4;   // g_min
  double kart_half_length = 0.9;
  double kart_half_width = 0.55;
  double nose_offset = 0.9;  // nose point ahead of the kart center
  double lidar_range = 30.0;
};

struct ControlInput {
  double accel = 0.0;     // a, m/s^2
  double yaw_rate = 0.0;  // e, rad/s
};

struct KartState {
  Vec2 pos;
  double v = 0.0;
  double heading = 0.0;
  double wear = 0.0;  // fraction in [0, 1]
  Progress progress;  // r and lap
  int lane = 0;
  bool on_straight = true;
  int lane_changes = 0;  // l, recent lane changes in the current section
  double t = 0.0;
  double last_cp_time = 0.0;  // time state: when `progress` last advanced
  std::optional<double> finish_time;  // gamma

  int r() const { return progress.checkpoint; }
  long ordinal(const TrackModel& track) const { return progress.ordinal(track.tau()); }
};

// grip multiplier in (grip_floor, 1]; scales the cornering limit.
inline double grip(double wear, const VehicleParams& p) {
  return p.grip_floor + (1.0 - p.grip_floor) * (1.0 - wear);
}

// Wear accumulates as 1 - exp(-kappa * total yaw travelled).
double update_wear(double wear, double abs_yaw_rate, double dt, const VehicleParams& p);

// One forward-Euler step. Controls are clamped to bounds; the yaw rate is
// additionally limited so |v * e| stays within lat_max * grip (understeer).
// Updates progress, lane/section caches, the lane-change counter and clocks.
KartState step(const KartState& state, ControlInput u, double dt,
               const VehicleParams& p, const TrackModel& track);

enum class LidarHit { None, Wall, Player };

struct LidarReading {
  double distance = 0.0;
  LidarHit hit = LidarHit::None;
};

inline constexpr int kLidarRayCount = 9;
// The three most forward rays (Theta).
inline constexpr std::array<int, 3> kLidarFrontRays = {3, 4, 5};

// 9 rays over a 180-degree fan centered on the kart's heading. Each reading is
// the distance to the nearest wall (q = width isoline) or the opponent's
// bounding box, capped at lidar_range.
std::array<LidarReading, kLidarRayCount> lidar_scan(const KartState& self,
                                                    const KartState& opponent,
                                                    const TrackModel& track,
                                                    const VehicleParams& p);

OrientedBox kart_box(const KartState& k, const VehicleParams& p);

// d^i(x^j): distance from self's nose point to the other kart's oriented
// rectangle; 0 when penetrating.
double nose_distance(const KartState& self, const KartState& other, const VehicleParams& p);

}  // namespace racing
