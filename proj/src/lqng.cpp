#include "racing/lqng.hpp"

#include <cmath>

#include "racing/errors.hpp"

namespace racing {

namespace {

// Adds rho * (z[coord] - target)^2 over the augmented state.
void add_tracking_term(LqStateMat& Q, int coord, double rho, double target) {
  Q(coord, coord) += rho;
  Q(coord, kLqStateDim - 1) -= rho * target;
  Q(kLqStateDim - 1, coord) -= rho * target;
  Q(kLqStateDim - 1, kLqStateDim - 1) += rho * target * target;
}

// Adds rho * (z[ci] - z[cj])^2.
void add_difference_term(LqStateMat& Q, int ci, int cj, double rho) {
  Q(ci, ci) += rho;
  Q(cj, cj) += rho;
  Q(ci, cj) -= rho;
  Q(cj, ci) -= rho;
}

}  // namespace

JointLinearModel linearize(const KartState& p0, const KartState& p1, double dt) {
  JointLinearModel m;
  m.A = LqStateMat::Identity();
  m.B[0] = LqInputMat::Zero();
  m.B[1] = LqInputMat::Zero();
  const KartState* karts[2] = {&p0, &p1};
  for (int k = 0; k < 2; ++k) {
    const int o = 4 * k;
    const double theta = karts[k]->heading;
    const double v = std::max(karts[k]->v, kMinLinearizationSpeed);
    m.A(o + 0, o + 2) = std::cos(theta) * dt;
    m.A(o + 0, o + 3) = -v * std::sin(theta) * dt;
    m.A(o + 1, o + 2) = std::sin(theta) * dt;
    m.A(o + 1, o + 3) = v * std::cos(theta) * dt;
    // First-order offset of the expansion about (v0, theta0), carried by the
    // constant coordinate so the map is exact to first order in raw state.
    m.A(o + 0, kLqStateDim - 1) = v * std::sin(theta) * theta * dt;
    m.A(o + 1, kLqStateDim - 1) = -v * std::cos(theta) * theta * dt;
    m.B[k](o + 2, 0) = dt;
    m.B[k](o + 3, 1) = dt;
  }
  return m;
}

StageCosts build_costs(const std::array<TargetWaypoint, 2>& targets, const LqWeights& weights,
                       const std::array<double, 2>& heading_refs) {
  StageCosts costs;
  for (int i = 0; i < 2; ++i) {
    LqStateMat& Q = costs.Q[i];
    Q.setZero();
    const int oi = 4 * i;
    const int oj = 4 * (1 - i);

    // Track own waypoint (rho1..rho3).
    add_tracking_term(Q, oi + 0, weights.track_pos, targets[i].pos.x);
    add_tracking_term(Q, oi + 1, weights.track_pos, targets[i].pos.y);
    add_tracking_term(Q, oi + 2, weights.track_vel, targets[i].speed);
    add_tracking_term(Q, oi + 3, weights.track_heading,
                      unwrap_near(targets[i].heading, heading_refs[i]));

    // Push the opponent away from its estimated waypoint (rho4)...
    add_tracking_term(Q, oj + 0, -weights.opp_waypoint, targets[1 - i].pos.x);
    add_tracking_term(Q, oj + 1, -weights.opp_waypoint, targets[1 - i].pos.y);

    // ...and away from us (rho5).
    add_difference_term(Q, oi + 0, oj + 0, -weights.collision);
    add_difference_term(Q, oi + 1, oj + 1, -weights.collision);

    costs.R[i] = LqControlMat::Zero();
    costs.R[i](0, 0) = weights.r_accel;
    costs.R[i](1, 1) = weights.r_yaw;
  }
  return costs;
}

LqStateVec augmented_state(const KartState& p0, const KartState& p1) {
  LqStateVec x;
  x << p0.pos.x, p0.pos.y, p0.v, p0.heading, p1.pos.x, p1.pos.y, p1.v, p1.heading, 1.0;
  return x;
}

LqGameSolution solve_coupled_riccati(const JointLinearModel& model, const StageCosts& costs,
                                     int steps) {
  if (steps < 1) throw ValidationError("coupled Riccati horizon must be at least 1 step");

  LqGameSolution sol;
  sol.gains[0].resize(steps);
  sol.gains[1].resize(steps);

  std::array<LqStateMat, 2> Z = {LqStateMat::Zero(), LqStateMat::Zero()};
  for (int t = steps - 1; t >= 0; --t) {
    const LqStateMat M0 = costs.Q[0] + Z[0];
    const LqStateMat M1 = costs.Q[1] + Z[1];

    // Stacked simultaneous first-order conditions in (u0, u1).
    Eigen::Matrix4d K;
    K.block<2, 2>(0, 0) = costs.R[0] + model.B[0].transpose() * M0 * model.B[0];
    K.block<2, 2>(0, 2) = model.B[0].transpose() * M0 * model.B[1];
    K.block<2, 2>(2, 0) = model.B[1].transpose() * M1 * model.B[0];
    K.block<2, 2>(2, 2) = costs.R[1] + model.B[1].transpose() * M1 * model.B[1];

    Eigen::Matrix<double, 4, kLqStateDim> rhs;
    rhs.topRows<2>() = model.B[0].transpose() * M0 * model.A;
    rhs.bottomRows<2>() = model.B[1].transpose() * M1 * model.A;

    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(K, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(3);
    const double rcond = smax > 0.0 ? smin / smax : 0.0;
    sol.min_rcond = std::min(sol.min_rcond, rcond);
    if (rcond < 1e-8) {
      throw SingularCouplingError("coupled gain system is singular (rcond " +
                                  std::to_string(rcond) + ")");
    }

    const Eigen::Matrix<double, 4, kLqStateDim> F = svd.solve(rhs);
    const LqGainMat F0 = F.topRows<2>();
    const LqGainMat F1 = F.bottomRows<2>();

    const LqStateMat A_cl = model.A - model.B[0] * F0 - model.B[1] * F1;
    Z[0] = F0.transpose() * costs.R[0] * F0 + A_cl.transpose() * M0 * A_cl;
    Z[1] = F1.transpose() * costs.R[1] * F1 + A_cl.transpose() * M1 * A_cl;
    Z[0] = 0.5 * (Z[0] + Z[0].transpose()).eval();
    Z[1] = 0.5 * (Z[1] + Z[1].transpose()).eval();

    sol.gains[0][t] = F0;
    sol.gains[1][t] = F1;
  }
  return sol;
}

TargetWaypoint nearest_anchor_target(const KartState& k, const TrackModel& track,
                                     double speed) {
  const long next_ordinal = k.progress.ordinal(track.tau()) + 1;
  const int cp = track.checkpoint_of_ordinal(next_ordinal);
  const int lane = track.nearest_lane(track.project(k.pos).lateral);
  const LaneAnchor anchor = track.lane_anchor(cp, lane);
  return {anchor.pos, speed, anchor.heading};
}

namespace {

std::optional<TargetWaypoint> plan_target(const WaypointPlan& plan, long ordinal, bool ego_side,
                                          const TrackModel& track) {
  for (const PlanEntry& e : plan.entries) {
    const long cp = ego_side ? e.ego_cp : e.opp_cp;
    if (cp <= ordinal) continue;
    const int lane = ego_side ? e.ego_lane : e.opp_lane;
    const double speed = ego_side ? e.ego_speed : e.opp_speed;
    const LaneAnchor anchor = track.lane_anchor(track.checkpoint_of_ordinal(cp), lane);
    return TargetWaypoint{anchor.pos, speed, anchor.heading};
  }
  return std::nullopt;
}

ControlInput clamp_control(const Eigen::Vector2d& u, const VehicleParams& params) {
  return {std::clamp(u(0), -params.a_max, params.a_max),
          std::clamp(u(1), -params.e_max, params.e_max)};
}

}  // namespace

ControlInput lqng_game_control(const KartState& ego, const KartState& opponent,
                               const std::array<TargetWaypoint, 2>& targets,
                               const LqWeights& weights, const VehicleParams& params,
                               const LqngOptions& options, LqngDiagnostics* diag) {
  LqngDiagnostics local;
  LqngDiagnostics& d = diag ? *diag : local;

  LqWeights w = weights;
  if (nose_distance(ego, opponent, params) > options.engage_radius) {
    w.opp_waypoint = 0.0;
    w.collision = 0.0;
  }

  const int steps = std::max(1, static_cast<int>(std::lround(options.horizon_seconds / options.dt)));
  const JointLinearModel model = linearize(ego, opponent, options.dt);
  const LqStateVec x0 = augmented_state(ego, opponent);

  try {
    const StageCosts costs = build_costs(targets, w, {ego.heading, opponent.heading});
    const LqGameSolution sol = solve_coupled_riccati(model, costs, steps);
    d.rcond = sol.min_rcond;
    return clamp_control(sol.first_control(x0, 0), params);
  } catch (const SingularCouplingError&) {
    d.fallback = true;
  }

  // Decoupled pure-tracking fallback.
  LqWeights decoupled = weights;
  decoupled.opp_waypoint = 0.0;
  decoupled.collision = 0.0;
  try {
    const StageCosts costs = build_costs(targets, decoupled, {ego.heading, opponent.heading});
    const LqGameSolution sol = solve_coupled_riccati(model, costs, steps);
    d.rcond = sol.min_rcond;
    return clamp_control(sol.first_control(x0, 0), params);
  } catch (const SingularCouplingError&) {
    return {-0.5 * params.a_max, 0.0};
  }
}

ControlInput lqng_control(const KartState& ego, const KartState& opponent,
                          const WaypointPlan* plan, const LqWeights& weights,
                          const VehicleParams& params, const LqngOptions& options,
                          const TrackModel& track, LqngDiagnostics* diag) {
  LqngDiagnostics local;
  LqngDiagnostics& d = diag ? *diag : local;
  d = LqngDiagnostics{};

  std::array<TargetWaypoint, 2> targets;
  bool have_ego_target = false;
  if (plan && ego.t - plan->epoch <= options.stale_after) {
    if (auto t = plan_target(*plan, ego.progress.ordinal(track.tau()), true, track)) {
      targets[0] = *t;
      have_ego_target = true;
    }
  }
  if (!have_ego_target) {
    targets[0] = nearest_anchor_target(ego, track, ego.v);
    d.stale_plan = true;
  }

  std::optional<TargetWaypoint> opp_target;
  if (plan) {
    opp_target = plan_target(*plan, opponent.progress.ordinal(track.tau()), false, track);
  }
  targets[1] = opp_target ? *opp_target : nearest_anchor_target(opponent, track, opponent.v);

  return lqng_game_control(ego, opponent, targets, weights, params, options, diag);
}

ControlInput tracking_lqr_control(const KartState& ego, const TargetWaypoint& target,
                                  const LqWeights& weights, const VehicleParams& params,
                                  const LqngOptions& options) {
  LqWeights w = weights;
  w.opp_waypoint = 0.0;
  w.collision = 0.0;
  const int steps = std::max(1, static_cast<int>(std::lround(options.horizon_seconds / options.dt)));
  const JointLinearModel model = linearize(ego, ego, options.dt);
  const StageCosts costs = build_costs({target, target}, w, {ego.heading, ego.heading});
  const LqGameSolution sol = solve_coupled_riccati(model, costs, steps);
  return clamp_control(sol.first_control(augmented_state(ego, ego), 0), params);
}

}  // namespace racing
