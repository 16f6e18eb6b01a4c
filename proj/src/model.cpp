#include "geoctl/model.hpp"

#include "geoctl/errors.hpp"
#include "geoctl/geom.hpp"

namespace geoctl {

std::pair<Vec3, Vec3> eval_disturbance(const DisturbanceModel& dist, const RigidState&) {
  return {Vec3(dist.Wx * dist.theta_x), Vec3(dist.WR * dist.theta_R)};
}

StateDeriv dynamics_deriv(const RigidState& s, const ControlInput& u,
                          const DisturbanceModel& dist, const QuadParams& p) {
  auto [dx_force, dist_torque] = eval_disturbance(dist, s);
  StateDeriv d;
  d.dx = s.v;
  d.dv = p.g * Vec3::UnitZ() - (u.f / p.m) * (s.R * Vec3::UnitZ()) + dx_force / p.m;
  d.dR = s.R * hat(s.Omega);
  d.dOmega = p.J.ldlt().solve(u.M - s.Omega.cross(p.J * s.Omega) + dist_torque);
  return d;
}

bool state_finite(const RigidState& s) {
  return s.x.allFinite() && s.v.allFinite() && s.R.allFinite() && s.Omega.allFinite();
}

std::pair<RigidState, EstimatorState> step(const RigidState& s, const EstimatorState& est,
                                           const ControlInput& u, const VecX& rate_x,
                                           const VecX& rate_R, const DisturbanceModel& dist,
                                           const QuadParams& p, double dt) {
  auto eval = [&](const RigidState& si) { return dynamics_deriv(si, u, dist, p); };
  auto advance = [&](const RigidState& si, const StateDeriv& k, double h) {
    RigidState o;
    o.x = si.x + h * k.dx;
    o.v = si.v + h * k.dv;
    o.R = si.R + h * k.dR;
    o.Omega = si.Omega + h * k.dOmega;
    return o;
  };

  StateDeriv k1 = eval(s);
  StateDeriv k2 = eval(advance(s, k1, 0.5 * dt));
  StateDeriv k3 = eval(advance(s, k2, 0.5 * dt));
  StateDeriv k4 = eval(advance(s, k3, dt));

  RigidState out;
  out.x = s.x + (dt / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  out.v = s.v + (dt / 6.0) * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
  out.R = s.R + (dt / 6.0) * (k1.dR + 2.0 * k2.dR + 2.0 * k3.dR + k4.dR);
  out.Omega = s.Omega + (dt / 6.0) * (k1.dOmega + 2.0 * k2.dOmega + 2.0 * k3.dOmega + k4.dOmega);

  if (!state_finite(out)) {
    fail(ErrorCode::IntegrationDiverged, "non-finite state after step");
  }
  out.R = project_so3(out.R);

  EstimatorState eout;
  // Rates are frozen over the step, so the RK4 update reduces to Euler.
  eout.theta_x = est.theta_x + dt * rate_x;
  eout.theta_R = est.theta_R + dt * rate_R;
  if (!eout.theta_x.allFinite() || !eout.theta_R.allFinite()) {
    fail(ErrorCode::IntegrationDiverged, "non-finite estimator state after step");
  }
  return {out, eout};
}

}  // namespace geoctl
