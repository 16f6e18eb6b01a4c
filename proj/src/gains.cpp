#include "geoctl/gains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geoctl/ctrl.hpp"
#include "geoctl/errors.hpp"
#include "geoctl/geom.hpp"

namespace geoctl {

double min_eig2(const Eigen::Matrix2d& m) {
  double tr = m(0, 0) + m(1, 1);
  double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  return 0.5 * tr - disc;
}

double spectral_norm2(const Eigen::Matrix2d& m) {
  Eigen::Matrix2d mtm = m.transpose() * m;
  double tr = mtm(0, 0) + mtm(1, 1);
  double det = mtm(0, 0) * mtm(1, 1) - mtm(0, 1) * mtm(1, 0);
  double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  return std::sqrt(std::max(0.0, 0.5 * tr + disc));
}

namespace {

void eig_range(const Mat3& J, double& lam_min, double& lam_max) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(J);
  lam_min = es.eigenvalues()(0);
  lam_max = es.eigenvalues()(2);
}

double spectral_norm3(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m);
  return svd.singularValues()(0);
}

void add_condition(StabilityReport& r, const std::string& name, double lhs, double rhs,
                   bool pass) {
  r.conditions.push_back({name, lhs, rhs, pass});
}

void add_pd_condition(StabilityReport& r, const std::string& name, const Eigen::Matrix2d& m) {
  r.matrices.emplace_back(name, m);
  double le = min_eig2(m);
  add_condition(r, name + "_positive_definite", le, 0.0, le > 0.0);
}

}  // namespace

const ConditionEntry* StabilityReport::find(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.condition == name) return &c;
  }
  return nullptr;
}

double StabilityReport::min_eig(const std::string& name) const {
  for (const auto& [n, m] : matrices) {
    if (n == name) return min_eig2(m);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

nlohmann::json StabilityReport::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["pass"] = pass;
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : conditions) {
    conds.push_back({{"condition", c.condition}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
  }
  j["conditions"] = conds;
  nlohmann::json mats;
  for (const auto& [n, m] : matrices) {
    mats[n] = {{"entries", {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}}, {"min_eig", min_eig2(m)}};
  }
  j["matrices"] = mats;
  j["B2"] = B2;
  if (kind == "attitude") j["c2_ceiling"] = c2_ceiling;
  if (kind == "position") {
    j["c1_ceiling"] = c1_ceiling;
    j["alpha"] = alpha;
  }
  return j;
}

StabilityReport check_attitude_gains(const QuadParams& p, const ControlGains& g, double wd_bound,
                                     double psi2) {
  StabilityReport r;
  r.kind = "attitude";
  double lam_m, lam_M;
  eig_range(p.J, lam_m, lam_M);
  r.B2 = spectral_norm3(2.0 * p.J - p.J.trace() * Mat3::Identity()) * wd_bound;

  add_condition(r, "kR_positive", g.kR, 0.0, g.kR > 0.0);
  add_condition(r, "kW_positive", g.kW, 0.0, g.kW > 0.0);
  add_condition(r, "c2_positive", g.c2, 0.0, g.c2 > 0.0);

  double ceil_sqrt = std::sqrt(g.kR * lam_m) / lam_M;
  double ceil_quad = 4.0 * g.kW / (8.0 * g.kR * lam_M + (g.kW + r.B2) * (g.kW + r.B2));
  r.c2_ceiling = std::min(ceil_sqrt, ceil_quad);
  add_condition(r, "c2_below_sqrt_ceiling", g.c2, ceil_sqrt, g.c2 < ceil_sqrt);
  add_condition(r, "c2_below_quadratic_ceiling", g.c2, ceil_quad, g.c2 < ceil_quad);

  Eigen::Matrix2d M21, M22;
  M21 << g.kR, -g.c2 * lam_M, -g.c2 * lam_M, lam_m;
  M21 *= 0.5;
  M22 << 2.0 * g.kR / (2.0 - psi2), g.c2 * lam_M, g.c2 * lam_M, lam_M;
  M22 *= 0.5;
  add_pd_condition(r, "M21", M21);
  add_pd_condition(r, "M22", M22);

  r.pass = std::all_of(r.conditions.begin(), r.conditions.end(),
                       [](const ConditionEntry& c) { return c.pass; });
  return r;
}

namespace {

struct PositionMatrices {
  Eigen::Matrix2d W1, W12, W2;
};

PositionMatrices position_matrices(const QuadParams& p, const ControlGains& g,
                                   const DomainConstants& dom, double lam_M) {
  double al = dom.alpha();
  PositionMatrices out;
  out.W1 << g.c1 * g.kx * (1.0 - al), -g.c1 * g.kv * (1.0 + al) / 2.0,
      -g.c1 * g.kv * (1.0 + al) / 2.0, g.kv * (1.0 - al) - p.m * g.c1;
  double w12 = dom.B_Wx * dom.B_theta + dom.B1;
  out.W12 << g.c1 * w12, 0.0, w12 + g.kx * dom.ex_max, 0.0;
  out.W2 << g.c2 * g.kR, -g.c2 * (g.kW + dom.B2) / 2.0, -g.c2 * (g.kW + dom.B2) / 2.0,
      g.kW - 2.0 * g.c2 * lam_M;
  return out;
}

}  // namespace

Eigen::Matrix2d decrement_matrix(const QuadParams& p, const ControlGains& g,
                                 const DomainConstants& dom) {
  double lam_m, lam_M;
  eig_range(p.J, lam_m, lam_M);
  PositionMatrices pm = position_matrices(p, g, dom, lam_M);
  double n12 = spectral_norm2(pm.W12);
  Eigen::Matrix2d W;
  W << min_eig2(pm.W1), -0.5 * n12, -0.5 * n12, min_eig2(pm.W2);
  return W;
}

StabilityReport check_position_gains(const QuadParams& p, const ControlGains& g,
                                     const DomainConstants& dom) {
  StabilityReport r;
  r.kind = "position";
  r.B2 = dom.B2;
  r.alpha = dom.alpha();
  double lam_m, lam_M;
  eig_range(p.J, lam_m, lam_M);
  double al = r.alpha;

  add_condition(r, "kx_positive", g.kx, 0.0, g.kx > 0.0);
  add_condition(r, "kv_positive", g.kv, 0.0, g.kv > 0.0);
  add_condition(r, "c1_positive", g.c1, 0.0, g.c1 > 0.0);
  add_condition(r, "alpha_below_one", al, 1.0, al < 1.0);

  double denom = g.kv * g.kv * (1.0 + al) * (1.0 + al) + 4.0 * p.m * g.kx * (1.0 - al);
  double ceil_gain = 4.0 * g.kx * g.kv * (1.0 - al) * (1.0 - al) / denom;
  double ceil_sqrt = std::sqrt(g.kx / p.m);
  r.c1_ceiling = std::min(ceil_gain, ceil_sqrt);
  add_condition(r, "c1_below_gain_ceiling", g.c1, ceil_gain, g.c1 < ceil_gain);
  add_condition(r, "c1_below_sqrt_ceiling", g.c1, ceil_sqrt, g.c1 < ceil_sqrt);

  PositionMatrices pm = position_matrices(p, g, dom, lam_M);
  add_pd_condition(r, "W1", pm.W1);
  r.matrices.emplace_back("W12", pm.W12);
  add_pd_condition(r, "W2", pm.W2);

  double n12 = spectral_norm2(pm.W12);
  double lam_W1 = min_eig2(pm.W1);
  double lam_W2 = min_eig2(pm.W2);
  double coupling_rhs = n12 * n12 / (4.0 * lam_W1);
  add_condition(r, "coupling_lam_W2_exceeds", lam_W2, coupling_rhs,
                lam_W1 > 0.0 && lam_W2 > coupling_rhs);

  Eigen::Matrix2d W;
  W << lam_W1, -0.5 * n12, -0.5 * n12, lam_W2;
  add_pd_condition(r, "W", W);

  Eigen::Matrix2d M11, M12, M21, M22;
  M11 << g.kx, -p.m * g.c1, -p.m * g.c1, p.m;
  M11 *= 0.5;
  M12 << g.kx, p.m * g.c1, p.m * g.c1, p.m;
  M12 *= 0.5;
  M21 << g.kR, -g.c2 * lam_M, -g.c2 * lam_M, lam_m;
  M21 *= 0.5;
  M22 << 2.0 * g.kR / (2.0 - dom.psi1), g.c2 * lam_M, g.c2 * lam_M, lam_M;
  M22 *= 0.5;
  add_pd_condition(r, "M11", M11);
  add_pd_condition(r, "M12", M12);
  add_pd_condition(r, "M21", M21);
  add_pd_condition(r, "M22", M22);

  r.pass = std::all_of(r.conditions.begin(), r.conditions.end(),
                       [](const ConditionEntry& c) { return c.pass; });
  return r;
}

LyapunovSample lyapunov_values(const Vec3& e_x, const Vec3& e_v, const Vec3& e_R, const Vec3& e_W,
                               double Psi, const EstimatorState& est, const DisturbanceModel& dist,
                               const ControlGains& g, const QuadParams& p,
                               const DomainConstants& dom, bool position_mode,
                               bool enforce_domain) {
  LyapunovSample out;
  out.in_domain = position_mode ? (Psi < dom.psi1 && e_x.norm() < dom.ex_max) : (Psi < dom.psi2);
  if (enforce_domain && !out.in_domain) {
    fail(ErrorCode::OutOfDomain,
         position_mode ? "position mode requires Psi < psi1 and ||e_x|| < ex_max"
                       : "attitude mode requires Psi < psi2");
  }
  VecX tx = dist.theta_x - est.theta_x;
  VecX tR = dist.theta_R - est.theta_R;
  out.V1 = 0.5 * g.kx * e_x.squaredNorm() + 0.5 * p.m * e_v.squaredNorm() +
           g.c1 * p.m * e_x.dot(e_v) + tx.squaredNorm() / (2.0 * g.gx);
  out.V2 = 0.5 * e_W.dot(p.J * e_W) + g.kR * Psi + g.c2 * e_R.dot(p.J * e_W) +
           tR.squaredNorm() / (2.0 * g.gR);
  out.V = out.V1 + out.V2;
  out.z1 << e_x.norm(), e_v.norm();
  out.z2 << e_R.norm(), e_W.norm();
  Eigen::Vector2d z(out.z1.norm(), out.z2.norm());
  out.decrement_bound = -z.dot(decrement_matrix(p, g, dom) * z);
  return out;
}

Vec3 coupling_term_X(const RigidState& s, const EstimatorState& est, const PositionCommand& cmd,
                     const ControlGains& g, const QuadParams& p, const MatX& Wx) {
  Vec3 e_x = s.x - cmd.xd;
  Vec3 e_v = s.v - cmd.vd;
  Vec3 A = desired_force(e_x, e_v, est, cmd, g, p, Wx);
  Rotation Rc = computed_attitude(e_x, e_v, est, cmd, g, p, Wx);
  double f = (-A).dot(s.R * Vec3::UnitZ());
  double denom = Vec3::UnitZ().dot(Rc.transpose() * s.R * Vec3::UnitZ());
  if (!(denom > 0.0)) {
    fail(ErrorCode::OutOfDomain, "e3^T Rc^T R e3 must be positive");
  }
  return (f / denom) * (denom * (s.R * Vec3::UnitZ()) - Rc * Vec3::UnitZ());
}

}  // namespace geoctl
