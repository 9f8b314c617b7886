#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "racing/geometry.hpp"

namespace racing {

enum class SegmentKind { Straight, Curve };

struct Checkpoint {
  Vec2 pos;
  double heading = 0.0;  // travel direction at the gate, radians
  SegmentKind kind = SegmentKind::Straight;
};

// Maximal run of same-kind checkpoints, inclusive index range.
struct TrackSegment {
  int first = 0;
  int last = 0;
  SegmentKind kind = SegmentKind::Straight;
};

struct LaneAnchor {
  int checkpoint = 0;
  int lane = 0;
  Vec2 pos;
  double heading = 0.0;
};

// Lap-aware progress: ordinal = lap * tau + checkpoint. Monotone over a race.
struct Progress {
  int lap = 0;
  int checkpoint = 0;

  long ordinal(int tau) const { return static_cast<long>(lap) * tau + checkpoint; }
  bool operator==(const Progress&) const = default;
};

// Result of projecting a world position onto the centerline polyline.
struct CenterlineProjection {
  double arc = 0.0;       // arc length from checkpoint 0, in [0, length)
  double lateral = 0.0;   // signed offset, positive left of travel
  double distance = 0.0;  // unsigned distance to polyline (= q)
  int segment = 0;        // polyline segment index (from checkpoint `segment`)
  Vec2 closest;           // nearest centerline point
};

// Track geometry: checkpoint polyline, lanes, width, straight/curve
// classification. Immutable after construction; all queries are const.
//
// Checkpoints and lanes are 0-based. `width` is the half-width: drivable
// positions satisfy centerline_distance(p) <= width.
class TrackModel {
 public:
  // Validates invariants (throws ValidationError naming the violated one).
  TrackModel(std::vector<Checkpoint> checkpoints, double width,
             std::vector<double> lane_offsets, bool closed);

  int tau() const { return static_cast<int>(checkpoints_.size()); }
  int lane_count() const { return static_cast<int>(lane_offsets_.size()); }
  double width() const { return width_; }
  bool closed() const { return closed_; }
  const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }
  const std::vector<double>& lane_offsets() const { return lane_offsets_; }
  const std::vector<TrackSegment>& segments() const { return segments_; }
  double length() const { return total_length_; }
  double lane_spacing() const;

  // Arc length of a checkpoint's gate from checkpoint 0.
  double arc_of(int checkpoint) const { return cumulative_[checkpoint]; }

  // Radius of curvature at a checkpoint (large finite value on straights).
  double curve_radius(int checkpoint) const { return radius_[checkpoint]; }

  // Id of the contiguous same-kind section containing the checkpoint.
  // On closed tracks the first and last runs merge when kinds match.
  int section_of(int checkpoint) const { return section_[checkpoint]; }

  SegmentKind kind_of(int checkpoint) const { return checkpoints_[checkpoint].kind; }

  // q(x): minimum distance from a position to the centerline polyline.
  double centerline_distance(Vec2 position) const;

  // Full projection (arc, signed lateral, distance).
  CenterlineProjection project(Vec2 position) const;

  bool in_bounds(Vec2 position) const { return centerline_distance(position) <= width_ + 1e-9; }

  // Largest k >= r_prev whose gate plane has been crossed, one lap's worth.
  // Monotone: never returns less than r_prev.
  int update_checkpoint_index(Vec2 position, int r_prev) const;

  // Lap-aware version of the above; wraps on closed tracks.
  Progress advance_progress(Vec2 position, Progress prev) const;

  // Arc-length progress near checkpoint r, continuous across the start line:
  // lap * length + local arc (may exceed lap boundaries slightly).
  double arc_progress(Vec2 position, Progress progress) const;

  // z(x): lane whose offset is nearest the position's lateral offset.
  // Ties break toward the lower lane id. Throws OffTrackError when q > width.
  int lane_of(Vec2 position) const;

  // Same nearest-offset rule without the bounds check.
  int nearest_lane(double lateral_offset) const;

  // Membership in the straight set: kind of the nearest checkpoint.
  // Throws OffTrackError when q > width.
  bool in_straight(Vec2 position) const;

  // Euclidean-nearest checkpoint; equidistant ties pick the lower index.
  int nearest_checkpoint(Vec2 position) const;

  LaneAnchor lane_anchor(int checkpoint, int lane) const;

  int checkpoint_of_ordinal(long ordinal) const;

  // Serialization. The format is documented in docs/track_format.md.
  static TrackModel load(const std::string& path);
  static TrackModel parse(const std::string& text);
  std::string serialize() const;
  void save(const std::string& path) const;

  // Content hash of the canonical serialization (racing-line cache key).
  std::uint64_t content_hash() const;

  // Closed loop: two straights of `straight_length` joined by semicircles of
  // `radius`, lanes spaced `lane_spacing` apart and centered on the centerline.
  static TrackModel build_oval(double straight_length, double radius, double width,
                               int lane_count, double lane_spacing,
                               double checkpoint_spacing = 12.0);

  // Closed circuit with changing radii, a tight U-turn, and turns in both
  // directions. Same lane conventions as build_oval.
  static TrackModel build_complex(double width = 6.0, int lane_count = 3,
                                  double lane_spacing = 2.0,
                                  double checkpoint_spacing = 10.0);

 private:
  void build_derived();
  void validate() const;

  // Start/end points of polyline segment i (i in [0, segment_count)).
  int segment_count() const { return closed_ ? tau() : tau() - 1; }
  Vec2 seg_a(int i) const { return checkpoints_[i].pos; }
  Vec2 seg_b(int i) const { return checkpoints_[(i + 1) % tau()].pos; }

  bool gate_crossed(Vec2 position, int checkpoint) const;

  std::vector<Checkpoint> checkpoints_;
  double width_ = 0.0;
  std::vector<double> lane_offsets_;
  bool closed_ = false;

  std::vector<double> cumulative_;  // arc length at each checkpoint
  std::vector<double> radius_;
  std::vector<int> section_;
  std::vector<TrackSegment> segments_;
  double total_length_ = 0.0;
};

}  // namespace racing
