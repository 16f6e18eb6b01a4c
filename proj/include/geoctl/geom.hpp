#pragma once

#include "geoctl/types.hpp"

namespace geoctl {

// hat(v) w = v x w for all w.
Mat3 hat(const Vec3& v);

// Inverse of hat. Throws NotSkew when ||m + m^T||_F > 1e-6.
Vec3 vee(const Mat3& m);

// vee of the antisymmetric part 0.5 (m - m^T); no skewness check.
Vec3 skew_part_vee(const Mat3& m);

// Rodrigues formula; second-order series below ||v|| < 1e-8.
Rotation exp_so3(const Vec3& v);

// Nearest rotation in the polar-decomposition sense (det +1 branch).
// Throws Degenerate when m is rank-deficient or the nearest orthogonal
// matrix has determinant -1.
Rotation project_so3(const Mat3& m);

// Attitude error function Psi = 0.5 tr(I - Rd^T R), in [0, 2].
double psi(const Rotation& r, const Rotation& rd);

// Attitude error vector e_R = 0.5 (Rd^T R - R^T Rd)^vee.
Vec3 e_r(const Rotation& r, const Rotation& rd);

// Angular-velocity error e_Omega = Omega - R^T Rd Omega_d.
Vec3 e_omega(const Rotation& r, const Vec3& omega, const Rotation& rd, const Vec3& omega_d);

// ||R^T R - I||_F <= tol and |det R - 1| <= tol.
bool is_rotation(const Mat3& m, double tol = 1e-9);

}  // namespace geoctl
