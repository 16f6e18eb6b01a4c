#include "geoctl/ctrl.hpp"

#include <string>

#include "geoctl/errors.hpp"
#include "geoctl/geom.hpp"

namespace geoctl {

Vec3 attitude_moment(const RigidState& s, const AttitudeCommand& cmd, const EstimatorState& est,
                     const ControlGains& g, const QuadParams& p, const MatX& WR) {
  Vec3 eR = e_r(s.R, cmd.Rd);
  Vec3 eW = e_omega(s.R, s.Omega, cmd.Rd, cmd.Wd);
  Vec3 wd_body = s.R.transpose() * cmd.Rd * cmd.Wd;
  return -g.kR * eR - g.kW * eW - Vec3(WR * est.theta_R) + wd_body.cross(p.J * wd_body) +
         p.J * (s.R.transpose() * cmd.Rd * cmd.dWd);
}

VecX attitude_adapt_rate(const Vec3& e_W, const Vec3& e_R, const MatX& WR,
                         const ControlGains& g) {
  return g.gR * (WR.transpose() * (e_W + g.c2 * e_R));
}

Vec3 desired_force(const Vec3& e_x, const Vec3& e_v, const EstimatorState& est,
                   const PositionCommand& cmd, const ControlGains& g, const QuadParams& p,
                   const MatX& Wx) {
  return -g.kx * e_x - g.kv * e_v - Vec3(Wx * est.theta_x) - p.m * p.g * Vec3::UnitZ() +
         p.m * cmd.ad;
}

Rotation computed_attitude(const Vec3& e_x, const Vec3& e_v, const EstimatorState& est,
                           const PositionCommand& cmd, const ControlGains& g, const QuadParams& p,
                           const MatX& Wx) {
  Vec3 A = desired_force(e_x, e_v, est, cmd, g, p, Wx);
  double na = A.norm();
  if (na <= 1e-6) {
    fail(ErrorCode::FreeFallCommand, "desired force vanishes, ||A|| = " + std::to_string(na));
  }
  Vec3 b3c = -A / na;
  Vec3 q = cmd.b1d - cmd.b1d.dot(b3c) * b3c;
  double nq = q.norm();
  if (nq <= 1e-6) {
    fail(ErrorCode::HeadingDegenerate, "heading reference parallel to thrust axis");
  }
  Vec3 b1c = q / nq;
  Rotation Rc;
  Rc.col(0) = b1c;
  Rc.col(1) = b3c.cross(b1c);
  Rc.col(2) = b3c;
  return Rc;
}

VecX position_adapt_rate(const Vec3& e_x, const Vec3& e_v, const EstimatorState& est,
                         const MatX& Wx, const ControlGains& g) {
  VecX r = Wx.transpose() * (e_v + g.c1 * e_x);
  double n = est.theta_x.norm();
  if (n < g.B_theta * (1.0 - 1e-12) || est.theta_x.dot(r) <= 0.0) {
    return g.gx * r;
  }
  return g.gx * (r - est.theta_x * (est.theta_x.dot(r) / est.theta_x.dot(est.theta_x)));
}

std::pair<ControlInput, PositionDiagnostics> position_wrench(
    const RigidState& s, const PositionCommand& cmd, const EstimatorState& est, const Vec3& Wc,
    const Vec3& dWc, const ControlGains& g, const QuadParams& p, const MatX& Wx, const MatX& WR) {
  PositionDiagnostics diag;
  diag.e_x = s.x - cmd.xd;
  diag.e_v = s.v - cmd.vd;
  Vec3 A = desired_force(diag.e_x, diag.e_v, est, cmd, g, p, Wx);
  diag.Rc = computed_attitude(diag.e_x, diag.e_v, est, cmd, g, p, Wx);
  diag.Wc = Wc;
  diag.dWc = dWc;
  AttitudeCommand att{diag.Rc, Wc, dWc};
  ControlInput u;
  u.f = (-A).dot(s.R * Vec3::UnitZ());
  u.M = attitude_moment(s, att, est, g, p, WR);
  diag.e_R = e_r(s.R, diag.Rc);
  diag.e_W = e_omega(s.R, s.Omega, diag.Rc, Wc);
  diag.Psi = psi(s.R, diag.Rc);
  return {u, diag};
}

std::pair<ControlInput, PositionDiagnostics> position_control(
    const RigidState& s, const PositionCommand& cmd, const EstimatorState& est,
    ControllerMemory& mem, const ControlGains& g, const QuadParams& p, const MatX& Wx,
    const MatX& WR, double dt, double wc_max, double dwc_max) {
  Vec3 e_x = s.x - cmd.xd;
  Vec3 e_v = s.v - cmd.vd;
  Rotation Rc_now = computed_attitude(e_x, e_v, est, cmd, g, p, Wx);

  Vec3 Wc = Vec3::Zero(), dWc = Vec3::Zero();
  if (mem.tick >= 1 && mem.has_Rc) {
    Wc = skew_part_vee(Rc_now.transpose() * (Rc_now - mem.Rc_prev) / dt);
  }
  if (mem.tick >= 3) {
    dWc = (Wc - mem.Wc_prev) / dt;
  }
  if (mem.tick < 2) {
    Wc.setZero();
    dWc.setZero();
  }
  double nw = Wc.norm();
  if (nw > wc_max) Wc *= wc_max / nw;
  double ndw = dWc.norm();
  if (ndw > dwc_max) dWc *= dwc_max / ndw;

  mem.Rc_prev = Rc_now;
  mem.has_Rc = true;
  mem.Wc_prev = Wc;
  mem.tick += 1;

  return position_wrench(s, cmd, est, Wc, dWc, g, p, Wx, WR);
}

double attitude_mode_thrust(const ThrustPolicy& policy, const RigidState& s,
                            const ControlGains& g, const QuadParams& p) {
  if (policy.kind == ThrustPolicy::ConstF) {
    return policy.f_const;
  }
  double c = Vec3::UnitZ().dot(s.R * Vec3::UnitZ());
  return c > 0.0 ? (g.kv * s.v(2) + p.m * p.g) * c : 0.0;
}

}  // namespace geoctl
