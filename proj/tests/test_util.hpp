#pragma once

#include <random>

#include "racing/track.hpp"
#include "racing/vehicle.hpp"

namespace racing::test {

inline TrackModel test_oval() { return TrackModel::build_oval(150, 40, 6.0, 3, 2.0, 12.0); }

// Open straight track along +x, tau checkpoints, 10 m apart.
inline TrackModel straight_track(int tau = 12, double width = 6.0, int lanes = 3) {
  std::vector<Checkpoint> cps;
  for (int i = 0; i < tau; ++i) {
    cps.push_back({{10.0 * i, 0.0}, 0.0, SegmentKind::Straight});
  }
  std::vector<double> offsets(lanes);
  for (int k = 0; k < lanes; ++k) offsets[k] = (k - (lanes - 1) * 0.5) * 2.0;
  return TrackModel(std::move(cps), width, std::move(offsets), false);
}

// Closed circle of the given radius, labelled curve everywhere.
inline TrackModel circle_track(double radius = 40.0, int tau = 36, double width = 6.0) {
  std::vector<Checkpoint> cps;
  for (int i = 0; i < tau; ++i) {
    const double a = 2.0 * kPi * i / tau;
    cps.push_back({{radius * std::cos(a), radius * std::sin(a)}, a + kPi / 2,
                   SegmentKind::Curve});
  }
  return TrackModel(std::move(cps), width, {-2.0, 0.0, 2.0}, true);
}

// Random position inside the band, with a safety margin off the walls.
inline Vec2 random_in_bounds(const TrackModel& track, std::mt19937_64& rng,
                             double margin = 0.3) {
  std::uniform_int_distribution<int> seg(0, track.tau() - (track.closed() ? 1 : 2));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int i = seg(rng);
  const Vec2 a = track.checkpoints()[i].pos;
  const Vec2 b = track.checkpoints()[(i + 1) % track.tau()].pos;
  const Vec2 p = a + (b - a) * unit(rng);
  const Vec2 dir = (b - a) * (1.0 / (b - a).norm());
  const double lat = (2.0 * unit(rng) - 1.0) * (track.width() - margin);
  return p + Vec2{-dir.y, dir.x} * lat;
}

inline KartState kart_at(const TrackModel& track, int checkpoint, int lane, double v,
                         double heading_delta = 0.0) {
  const LaneAnchor a = track.lane_anchor(checkpoint, lane);
  KartState k;
  k.pos = a.pos;
  k.heading = wrap_angle(a.heading + heading_delta);
  k.v = v;
  k.progress = {0, checkpoint};
  k.lane = lane;
  k.on_straight = track.kind_of(checkpoint) == SegmentKind::Straight;
  return k;
}

}  // namespace racing::test
