#pragma once

#include <utility>

#include "geoctl/types.hpp"

namespace geoctl {

// Attitude-mode moment law:
//   M = -kR e_R - kW e_Omega - WR theta_R_est
//       + hat(R^T Rd Wd) J (R^T Rd Wd) + J (R^T Rd dWd)
Vec3 attitude_moment(const RigidState& s, const AttitudeCommand& cmd, const EstimatorState& est,
                     const ControlGains& g, const QuadParams& p, const MatX& WR);

// Attitude estimator rate (unconstrained): gR WR^T (e_Omega + c2 e_R).
VecX attitude_adapt_rate(const Vec3& e_W, const Vec3& e_R, const MatX& WR, const ControlGains& g);

// Desired force vector A = -kx e_x - kv e_v - Wx theta_x_est - m g e3 + m a_d.
Vec3 desired_force(const Vec3& e_x, const Vec3& e_v, const EstimatorState& est,
                   const PositionCommand& cmd, const ControlGains& g, const QuadParams& p,
                   const MatX& Wx);

// Computed attitude Rc = [b1c | b3c x b1c | b3c] with b3c = -A/||A|| and b1c
// the normalized projection of b1d onto the plane perpendicular to b3c.
// Throws FreeFallCommand when ||A|| <= 1e-6 and HeadingDegenerate when b1d is
// parallel to b3c within 1e-6.
Rotation computed_attitude(const Vec3& e_x, const Vec3& e_v, const EstimatorState& est,
                           const PositionCommand& cmd, const ControlGains& g, const QuadParams& p,
                           const MatX& Wx);

// Position estimator rate with projection: full rate gx Wx^T (e_v + c1 e_x)
// strictly inside the ball ||theta|| < B_theta or when the radial component is
// inward; tangential component only on the boundary with outward drive.
VecX position_adapt_rate(const Vec3& e_x, const Vec3& e_v, const EstimatorState& est,
                         const MatX& Wx, const ControlGains& g);

// Finite-difference memory for the commanded angular velocity in position mode.
struct ControllerMemory {
  Rotation Rc_prev = Mat3::Identity();
  Vec3 Wc_prev = Vec3::Zero();
  long tick = 0;
  int segment = -1;
  bool has_Rc = false;
};

struct PositionDiagnostics {
  Vec3 e_x = Vec3::Zero();
  Vec3 e_v = Vec3::Zero();
  Vec3 e_R = Vec3::Zero();
  Vec3 e_W = Vec3::Zero();
  double Psi = 0.0;
  Rotation Rc = Mat3::Identity();
  Vec3 Wc = Vec3::Zero();   // frozen commanded angular velocity used for M
  Vec3 dWc = Vec3::Zero();
};

// Pure position-mode wrench with (Wc, dWc) supplied (already frozen):
//   f = (kx e_x + kv e_v + Wx theta_x_est + m g e3 - m a_d) . R e3
//   M = attitude law against (Rc, Wc, dWc)
std::pair<ControlInput, PositionDiagnostics> position_wrench(
    const RigidState& s, const PositionCommand& cmd, const EstimatorState& est, const Vec3& Wc,
    const Vec3& dWc, const ControlGains& g, const QuadParams& p, const MatX& Wx, const MatX& WR);

// Full position-mode controller tick: updates the finite-difference memory
// (Omega_c from backward differences of Rc, dOmega_c from differences of
// Omega_c, both zeroed on the first two ticks and norm-clamped to wc_max /
// dwc_max), then evaluates the wrench at the current state.
std::pair<ControlInput, PositionDiagnostics> position_control(
    const RigidState& s, const PositionCommand& cmd, const EstimatorState& est,
    ControllerMemory& mem, const ControlGains& g, const QuadParams& p, const MatX& Wx,
    const MatX& WR, double dt, double wc_max, double dwc_max);

// Thrust choice while in attitude mode (the moment law leaves f free).
struct ThrustPolicy {
  enum Kind { AltHold, ConstF } kind = AltHold;
  double f_const = 0.0;
};

// Altitude-hold law f = (kv v3 + m g) (e3 . R e3), clamped to 0 when the body
// thrust axis points upward relative to gravity; or the constant alternative.
double attitude_mode_thrust(const ThrustPolicy& policy, const RigidState& s,
                            const ControlGains& g, const QuadParams& p);

}  // namespace geoctl
