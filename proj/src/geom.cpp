#include "geoctl/geom.hpp"

#include <cmath>

#include "geoctl/errors.hpp"

namespace geoctl {

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v(2), v(1),
       v(2), 0.0, -v(0),
      -v(1), v(0), 0.0;
  return m;
}

Vec3 vee(const Mat3& m) {
  double skew_defect = (m + m.transpose()).norm();
  if (skew_defect > 1e-6) {
    fail(ErrorCode::NotSkew, "||m + m^T|| = " + std::to_string(skew_defect));
  }
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

Vec3 skew_part_vee(const Mat3& m) {
  Mat3 s = 0.5 * (m - m.transpose());
  return Vec3(s(2, 1), s(0, 2), s(1, 0));
}

Rotation exp_so3(const Vec3& v) {
  double th = v.norm();
  Mat3 k = hat(v);
  if (th < 1e-8) {
    return Mat3::Identity() + k + 0.5 * (k * k);
  }
  return Mat3::Identity() + (std::sin(th) / th) * k +
         ((1.0 - std::cos(th)) / (th * th)) * (k * k);
}

Rotation project_so3(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3& s = svd.singularValues();
  if (!(s(2) > 1e-9 * s(0)) || !(s(0) > 0.0)) {
    fail(ErrorCode::Degenerate, "rank-deficient matrix, singular values ["
         + std::to_string(s(0)) + ", " + std::to_string(s(1)) + ", " + std::to_string(s(2)) + "]");
  }
  Mat3 uv = svd.matrixU() * svd.matrixV().transpose();
  if (uv.determinant() < 0.0) {
    fail(ErrorCode::Degenerate, "nearest orthogonal matrix has determinant -1");
  }
  return uv;
}

double psi(const Rotation& r, const Rotation& rd) {
  return 0.5 * (Mat3::Identity() - rd.transpose() * r).trace();
}

Vec3 e_r(const Rotation& r, const Rotation& rd) {
  // Rd^T R - R^T Rd is antisymmetric by construction; read components directly.
  Mat3 s = rd.transpose() * r - r.transpose() * rd;
  return 0.5 * Vec3(s(2, 1), s(0, 2), s(1, 0));
}

Vec3 e_omega(const Rotation& r, const Vec3& omega, const Rotation& rd, const Vec3& omega_d) {
  return omega - r.transpose() * rd * omega_d;
}

bool is_rotation(const Mat3& m, double tol) {
  double ortho = (m.transpose() * m - Mat3::Identity()).norm();
  return ortho <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

}  // namespace geoctl
