#pragma once

#include <utility>

#include "geoctl/types.hpp"

namespace geoctl {

struct StateDeriv {
  Vec3 dx = Vec3::Zero();
  Vec3 dv = Vec3::Zero();
  Mat3 dR = Mat3::Zero();
  Vec3 dOmega = Vec3::Zero();
};

// (Wx theta_x, WR theta_R): disturbance force and torque at the given state.
std::pair<Vec3, Vec3> eval_disturbance(const DisturbanceModel& dist, const RigidState& s);

// Equations of motion:
//   dx = v
//   m dv = m g e3 - f R e3 + Wx theta_x
//   dR = R hat(Omega)
//   J dOmega = M - Omega x J Omega + WR theta_R
StateDeriv dynamics_deriv(const RigidState& s, const ControlInput& u,
                          const DisturbanceModel& dist, const QuadParams& p);

// Classical RK4 over the concatenated plant + estimator state with the control
// input and estimator rates held fixed across stages; R re-projected to the
// rotation group after the step. Throws IntegrationDiverged when any state
// component is non-finite afterwards.
std::pair<RigidState, EstimatorState> step(const RigidState& s, const EstimatorState& est,
                                           const ControlInput& u, const VecX& rate_x,
                                           const VecX& rate_R, const DisturbanceModel& dist,
                                           const QuadParams& p, double dt);

bool state_finite(const RigidState& s);

}  // namespace geoctl
