#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "racing/mcts.hpp"
#include "racing/track.hpp"
#include "racing/vehicle.hpp"

namespace racing {

// Joint state layout: [x1 y1 v1 th1  x2 y2 v2 th2  1]. The trailing constant
// coordinate carries the affine tracking terms as pure quadratics.
inline constexpr int kLqStateDim = 9;
inline constexpr int kLqControlDim = 2;

using LqStateMat = Eigen::Matrix<double, kLqStateDim, kLqStateDim>;
using LqInputMat = Eigen::Matrix<double, kLqStateDim, kLqControlDim>;
using LqGainMat = Eigen::Matrix<double, kLqControlDim, kLqStateDim>;
using LqControlMat = Eigen::Matrix<double, kLqControlDim, kLqControlDim>;
using LqStateVec = Eigen::Matrix<double, kLqStateDim, 1>;

struct LqWeights {
  double track_pos = 4.0;      // rho1
  double track_vel = 1.0;      // rho2
  double track_heading = 1.0;  // rho3
  double opp_waypoint = 0.2;   // rho4, repulsion from the opponent's waypoint
  double collision = 1.5;      // rho5, repulsion between players
  double r_accel = 0.1;
  double r_yaw = 0.1;
};

struct TargetWaypoint {
  Vec2 pos;
  double speed = 0.0;
  double heading = 0.0;
};

struct JointLinearModel {
  LqStateMat A;
  std::array<LqInputMat, 2> B;
};

// The speed entering the A-matrix theta column is floored here: below this
// the linear model loses all steering authority over position and a kart
// aimed parallel to a wall can never be commanded back onto its target.
inline constexpr double kMinLinearizationSpeed = 3.0;

// Discrete-time linearization about each player's current (v, theta);
// time-invariant over the horizon. The linearization speed is
// max(v, kMinLinearizationSpeed).
JointLinearModel linearize(const KartState& p0, const KartState& p1, double dt);

struct StageCosts {
  std::array<LqStateMat, 2> Q;
  std::array<LqControlMat, 2> R;
};

// Quadratic stage costs over the augmented joint state. Player i tracks
// targets[i]; the rho4 term repels player 1-i from targets[1-i]; the rho5
// term repels the players from each other. Heading targets are unwrapped
// near each player's current heading.
StageCosts build_costs(const std::array<TargetWaypoint, 2>& targets, const LqWeights& weights,
                       const std::array<double, 2>& heading_refs);

struct LqGameSolution {
  // gains[k][t] is player k's feedback gain at step t; u_k = -F_k x.
  std::array<std::vector<LqGainMat>, 2> gains;
  double min_rcond = 1.0;

  Eigen::Vector2d first_control(const LqStateVec& x0, int player) const {
    return -gains[player][0] * x0;
  }
};

// Backward coupled-Riccati recursion for the two-player feedback Nash
// equilibrium. Cost for player k: sum over steps of
// x_{t+1}' Q_k x_{t+1} + u_{k,t}' R_k u_{k,t}.
// Throws SingularCouplingError when the stacked first-order-condition system
// has reciprocal condition number below 1e-8, and HorizonZero via
// ValidationError when steps < 1.
LqGameSolution solve_coupled_riccati(const JointLinearModel& model, const StageCosts& costs,
                                     int steps);

LqStateVec augmented_state(const KartState& p0, const KartState& p1);

struct LqngOptions {
  double dt = 0.02;
  double horizon_seconds = 0.06;  // delta-bar
  // Beyond this nose distance the game terms (rho4, rho5) are disabled; the
  // quadratic repulsion of a distant opponent grows with distance and would
  // otherwise dominate tracking.
  double engage_radius = 12.0;
  double stale_after = 2.0;  // plan age limit, seconds
};

struct LqngDiagnostics {
  bool fallback = false;    // decoupled tracking LQR used
  bool stale_plan = false;  // nearest-anchor target substituted
  double rcond = 1.0;
};

// One 50 Hz control step: select the upcoming waypoints from the plan (or the
// nearest-anchor fallback), linearize, build costs, solve, and clamp the
// ego player's first-step control. `plan` may be null (no high-level layer).
ControlInput lqng_control(const KartState& ego, const KartState& opponent,
                          const WaypointPlan* plan, const LqWeights& weights,
                          const VehicleParams& params, const LqngOptions& options,
                          const TrackModel& track, LqngDiagnostics* diag = nullptr);

// Same solve with explicitly chosen targets (fixed-line upper layer).
ControlInput lqng_game_control(const KartState& ego, const KartState& opponent,
                               const std::array<TargetWaypoint, 2>& targets,
                               const LqWeights& weights, const VehicleParams& params,
                               const LqngOptions& options, LqngDiagnostics* diag = nullptr);

// Target the given waypoint directly with the game terms disabled (plumbing
// baseline and singular-coupling fallback path).
ControlInput tracking_lqr_control(const KartState& ego, const TargetWaypoint& target,
                                  const LqWeights& weights, const VehicleParams& params,
                                  const LqngOptions& options);

// Nearest-lane anchor of the checkpoint after `ordinal`, at the given speed.
TargetWaypoint nearest_anchor_target(const KartState& k, const TrackModel& track,
                                     double speed);

}  // namespace racing
