#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geoctl/types.hpp"

namespace geoctl {

struct ConditionEntry {
  std::string condition;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct StabilityReport {
  std::string kind;  // "attitude" or "position"
  std::vector<ConditionEntry> conditions;
  std::vector<std::pair<std::string, Eigen::Matrix2d>> matrices;  // with min eigenvalues below
  double B2 = 0.0;
  double c2_ceiling = 0.0;
  double c1_ceiling = 0.0;
  double alpha = 0.0;
  bool pass = false;

  const ConditionEntry* find(const std::string& name) const;
  double min_eig(const std::string& name) const;
  nlohmann::json to_json() const;
};

// Smallest / largest eigenvalue of a symmetric 2x2 matrix (closed form).
double min_eig2(const Eigen::Matrix2d& m);
// Spectral norm of a 2x2 matrix.
double spectral_norm2(const Eigen::Matrix2d& m);

// Attitude-mode gain conditions:
//   B2 = ||2J - tr(J) I||_2 * wd_bound
//   c2 < min{ sqrt(kR lam_min(J)) / lam_max(J),
//             4 kW / (8 kR lam_max(J) + (kW + B2)^2) }
// plus positive definiteness of M21 and M22 (Lyapunov sandwich bounds).
StabilityReport check_attitude_gains(const QuadParams& p, const ControlGains& g, double wd_bound,
                                     double psi2 = 1.9);

// Position-mode gain conditions: the c1 ceiling, the matrices W1, W12, W2 and
// the coupling inequality lam_min(W2) > ||W12||^2 / (4 lam_min(W1)), plus
// positive definiteness of M11, M12, M21, M22 and the combined W.
StabilityReport check_position_gains(const QuadParams& p, const ControlGains& g,
                                     const DomainConstants& dom);

// Combined 2x2 decrement matrix W built from lam_min(W1), lam_min(W2), ||W12||.
Eigen::Matrix2d decrement_matrix(const QuadParams& p, const ControlGains& g,
                                 const DomainConstants& dom);

struct LyapunovSample {
  double V1 = 0.0;
  double V2 = 0.0;
  double V = 0.0;
  Eigen::Vector2d z1 = Eigen::Vector2d::Zero();  // (||e_x||, ||e_v||)
  Eigen::Vector2d z2 = Eigen::Vector2d::Zero();  // (||e_R||, ||e_Omega||)
  double decrement_bound = 0.0;                  // -z^T W z with z = (||z1||, ||z2||)
  bool in_domain = false;
};

// V1 = 0.5 kx ||e_x||^2 + 0.5 m ||e_v||^2 + c1 m e_x . e_v + ||th_x - th_x_est||^2 / (2 gx)
// V2 = 0.5 e_W . J e_W + kR Psi + c2 e_R . J e_W + ||th_R - th_R_est||^2 / (2 gR)
// Domain: position mode requires Psi < psi1 and ||e_x|| < ex_max; attitude
// mode requires Psi < psi2. With enforce_domain, out-of-domain samples throw
// OutOfDomain (monitoring is advisory: the caller may instead pass false and
// read the in_domain flag).
LyapunovSample lyapunov_values(const Vec3& e_x, const Vec3& e_v, const Vec3& e_R, const Vec3& e_W,
                               double Psi, const EstimatorState& est, const DisturbanceModel& dist,
                               const ControlGains& g, const QuadParams& p,
                               const DomainConstants& dom, bool position_mode,
                               bool enforce_domain = true);

// X = f / (e3^T Rc^T R e3) * ((e3^T Rc^T R e3) R e3 - Rc e3).
// Throws OutOfDomain when the denominator is not positive.
Vec3 coupling_term_X(const RigidState& s, const EstimatorState& est, const PositionCommand& cmd,
                     const ControlGains& g, const QuadParams& p, const MatX& Wx);

}  // namespace geoctl
