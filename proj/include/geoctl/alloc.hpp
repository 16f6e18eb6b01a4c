#pragma once

#include <utility>

#include "geoctl/types.hpp"

namespace geoctl {

using RotorThrusts = Eigen::Vector4d;

// Solve [f; M] = B [f1..f4] for the rotor thrusts, with
//   B = [[1,1,1,1], [0,d,0,-d], [-d,0,d,0], [-ctf,ctf,-ctf,ctf]].
// Closed-form inverse. Throws SingularMixer when d <= 0 or ctf <= 0.
RotorThrusts mix(double f, const Vec3& M, const QuadParams& p);

// Clamp each rotor thrust to [f_min, f_max].
RotorThrusts saturate(const RotorThrusts& t, const QuadParams& p);

// Apply B: total thrust and moment produced by the given rotor thrusts.
std::pair<double, Vec3> unmix(const RotorThrusts& t, const QuadParams& p);

// What the plant actually receives after allocation and saturation.
struct Realized {
  double f = 0.0;
  Vec3 M = Vec3::Zero();
  RotorThrusts rotors = RotorThrusts::Zero();
  bool saturated = false;
};

// realized = unmix(saturate(mix(f_cmd, M_cmd))).
Realized realized(double f_cmd, const Vec3& M_cmd, const QuadParams& p);

}  // namespace geoctl
