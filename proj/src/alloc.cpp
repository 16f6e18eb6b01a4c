#include "geoctl/alloc.hpp"

#include <algorithm>
#include <string>

#include "geoctl/errors.hpp"

namespace geoctl {

RotorThrusts mix(double f, const Vec3& M, const QuadParams& p) {
  if (!(p.d > 0.0) || !(p.ctf > 0.0)) {
    fail(ErrorCode::SingularMixer,
         "mixer requires d > 0 and ctf > 0, got d = " + std::to_string(p.d) +
             ", ctf = " + std::to_string(p.ctf));
  }
  double fq = 0.25 * f;
  double roll = M(0) / (2.0 * p.d);
  double pitch = M(1) / (2.0 * p.d);
  double yaw = M(2) / (4.0 * p.ctf);
  RotorThrusts t;
  t(0) = fq - pitch - yaw;
  t(1) = fq + roll + yaw;
  t(2) = fq + pitch - yaw;
  t(3) = fq - roll + yaw;
  return t;
}

RotorThrusts saturate(const RotorThrusts& t, const QuadParams& p) {
  RotorThrusts out;
  for (int i = 0; i < 4; ++i) out(i) = std::clamp(t(i), p.f_min, p.f_max);
  return out;
}

std::pair<double, Vec3> unmix(const RotorThrusts& t, const QuadParams& p) {
  double f = t.sum();
  Vec3 M(p.d * (t(1) - t(3)),
         p.d * (t(2) - t(0)),
         p.ctf * (-t(0) + t(1) - t(2) + t(3)));
  return {f, M};
}

Realized realized(double f_cmd, const Vec3& M_cmd, const QuadParams& p) {
  RotorThrusts raw = mix(f_cmd, M_cmd, p);
  RotorThrusts clamped = saturate(raw, p);
  Realized r;
  r.rotors = clamped;
  r.saturated = (raw - clamped).cwiseAbs().maxCoeff() > 0.0;
  auto [f, M] = unmix(clamped, p);
  r.f = f;
  r.M = M;
  return r;
}

}  // namespace geoctl
