#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "geoctl/ctrl.hpp"
#include "geoctl/types.hpp"

namespace geoctl {

enum class Mode { Attitude, Position };

enum class GeneratorId { Flip, Hover, Lissajous };

struct FlipParams {
  Vec3 axis = Vec3::UnitX();  // unit rotation axis
  double rate = 0.0;          // rad/s
};

struct HoverParams {
  Vec3 x_target = Vec3::Zero();
  Vec3 b1d = Vec3::UnitX();
};

struct ScheduleEntry {
  Mode mode = Mode::Position;
  double start = 0.0;
  double end = 0.0;
  GeneratorId gen = GeneratorId::Hover;
  FlipParams flip;
  HoverParams hover;
};

// Contiguous, non-overlapping intervals starting at 0; half-open except that
// the final instant belongs to the last interval.
struct ModeSchedule {
  std::vector<ScheduleEntry> entries;
  double end() const;
  void validate() const;  // throws ConfigInvalid
};

// Rd(t) = exp_so3(rate * t * axis), Wd = rate * axis, dWd = 0.
AttitudeCommand flip_attitude_cmd(double t, const Vec3& axis, double rate);

// Linear descent from x_o = [0.2, -2.8, -1.2] to x_i = [1, 0, -1.5] over the
// first 8 s, then x_d = [sin(s + pi/2), sin 2s, -1.5] with s = t - 8; b1d = e1.
PositionCommand lissajous_position_cmd(double t);

// Constant set-point, zero derivatives.
PositionCommand hover_cmd(const Vec3& x_target, const Vec3& b1d);

struct ActiveCommand {
  Mode mode = Mode::Position;
  int segment = 0;
  AttitudeCommand att;
  PositionCommand pos;
};

// Generator output for the interval containing t; switch boundaries belong to
// the later interval. Throws OutOfSchedule when t is outside [0, end].
ActiveCommand active_command(const ModeSchedule& sched, double t);

// Finite-difference limits for the commanded angular velocity estimates.
struct FdParams {
  double wc_max = 4.0 * M_PI;  // rad/s
  double dwc_max = 100.0;      // rad/s^2
};

struct ScenarioConfig {
  std::string name;
  QuadParams params;
  ControlGains gains;
  DomainConstants domain;
  DisturbanceModel disturbance;
  RigidState initial;
  EstimatorState initial_est;
  ModeSchedule schedule;
  double dt = 1e-3;
  double duration = 0.0;
  bool adaptive = true;
  ThrustPolicy attitude_thrust;
  FdParams fd;
  double wd_bound = 1.0;  // bound on the commanded angular-velocity norm
  double axd_max = 0.0;   // bound on the commanded acceleration norm

  nlohmann::json to_json() const;  // canonical effective config
  void validate() const;           // throws ConfigInvalid
};

// Parse and validate a config document; unknown keys are rejected.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);

}  // namespace geoctl
