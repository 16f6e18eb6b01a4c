#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace geoctl {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
// Orthonormal with det +1; validity is checked where it matters (see geom.hpp).
using Rotation = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Physical constants of the vehicle.
struct QuadParams {
  double m = 0.755;               // mass, kg
  Mat3 J = Mat3::Identity();      // inertia, kg m^2, symmetric positive definite
  double d = 0.169;               // rotor arm length, m
  double ctf = 0.1056;            // torque-to-thrust coefficient, m
  double g = 9.81;                // gravitational acceleration, m/s^2
  double f_min = 0.0;             // per-rotor thrust floor, N
  double f_max = 3.2;             // per-rotor thrust ceiling, N
  void validate() const;          // throws ConfigInvalid
};

// Full rigid-body state; e3 points down, altitudes are negative z.
struct RigidState {
  Vec3 x = Vec3::Zero();          // position, inertial frame, m
  Vec3 v = Vec3::Zero();          // velocity, inertial frame, m/s
  Rotation R = Mat3::Identity();  // body -> inertial
  Vec3 Omega = Vec3::Zero();      // angular velocity, body frame, rad/s
};

// Structured disturbance W * theta with constant regressors (3 x P).
struct DisturbanceModel {
  MatX Wx = MatX::Identity(3, 3);
  MatX WR = MatX::Identity(3, 3);
  VecX theta_x = VecX::Zero(3);   // true force parameters, N
  VecX theta_R = VecX::Zero(3);   // true torque parameters, N m
};

struct ControlInput {
  double f = 0.0;                 // total thrust, N
  Vec3 M = Vec3::Zero();          // moment, body frame, N m
};

// Adaptive parameter estimates, integrated alongside the plant.
struct EstimatorState {
  VecX theta_x = VecX::Zero(3);
  VecX theta_R = VecX::Zero(3);
};

struct ControlGains {
  double kx = 6.0, kv = 3.0;      // position / velocity gains
  double kR = 0.7, kW = 0.12;     // attitude / angular-velocity gains
  double c1 = 0.1, c2 = 0.1;      // Lyapunov cross-term constants
  double gx = 2.0, gR = 2.0;      // adaptation rates gamma_x, gamma_R
  double B_theta = 0.5;           // estimate-norm ceiling for the projection law
  void validate() const;          // throws ConfigInvalid
};

// Constants describing the region where the stability analysis holds.
struct DomainConstants {
  double psi1 = 0.9;              // position-mode attitude-error ceiling, in (0,1)
  double psi2 = 1.9;              // attitude-mode attitude-error ceiling, in (0,2)
  double ex_max = 2.0;            // position-error ceiling, m
  double B1 = 0.0;                // bound on || -m g e3 + m a_d ||, N
  double B2 = 0.0;                // gyroscopic coupling bound, N m
  double B_Wx = 1.0;              // bound on the force regressor norm
  double B_theta = 0.5;           // disturbance-parameter bound (mirrors gains)
  double alpha() const { return std::sqrt(psi1 * (2.0 - psi1)); }
  void validate() const;          // throws ConfigInvalid
};

struct AttitudeCommand {
  Rotation Rd = Mat3::Identity();
  Vec3 Wd = Vec3::Zero();         // Omega_d, body frame, rad/s
  Vec3 dWd = Vec3::Zero();        // dOmega_d/dt, rad/s^2
};

struct PositionCommand {
  Vec3 xd = Vec3::Zero();
  Vec3 vd = Vec3::Zero();
  Vec3 ad = Vec3::Zero();         // commanded acceleration
  Vec3 b1d = Vec3::UnitX();       // heading reference, unit norm
};

}  // namespace geoctl
