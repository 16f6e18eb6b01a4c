#include "geoctl/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string>

#include "geoctl/errors.hpp"
#include "geoctl/geom.hpp"

namespace geoctl {

namespace {

using nlohmann::json;

[[noreturn]] void cfg_fail(const std::string& where, const std::string& msg) {
  fail(ErrorCode::ConfigInvalid, where + ": " + msg);
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) cfg_fail(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) cfg_fail(where, "unknown key '" + it.key() + "'");
  }
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) cfg_fail(where, "expected a number");
  return j.get<double>();
}

double num_req(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) cfg_fail(where, std::string("missing key '") + key + "'");
  return num(j.at(key), where + "." + key);
}

double num_or(const json& j, const char* key, double dflt, const std::string& where) {
  return j.contains(key) ? num(j.at(key), where + "." + key) : dflt;
}

bool bool_or(const json& j, const char* key, bool dflt, const std::string& where) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_boolean()) cfg_fail(where + "." + key, "expected a boolean");
  return j.at(key).get<bool>();
}

Vec3 vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) cfg_fail(where, "expected an array of 3 numbers");
  return Vec3(num(j[0], where), num(j[1], where), num(j[2], where));
}

Vec3 vec3_or(const json& j, const char* key, const Vec3& dflt, const std::string& where) {
  return j.contains(key) ? vec3(j.at(key), where + "." + key) : dflt;
}

VecX vecx(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) cfg_fail(where, "expected a non-empty array of numbers");
  VecX v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<long>(i)) = num(j[i], where);
  return v;
}

MatX matx(const json& j, long rows, long cols, const std::string& where) {
  if (!j.is_array() || static_cast<long>(j.size()) != rows) {
    cfg_fail(where, "expected " + std::to_string(rows) + " rows");
  }
  MatX m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    const json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<long>(row.size()) != cols) {
      cfg_fail(where, "expected " + std::to_string(cols) + " columns per row");
    }
    for (long c = 0; c < cols; ++c) m(r, c) = num(row[static_cast<size_t>(c)], where);
  }
  return m;
}

json jval(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

json jval(const VecX& v) {
  json a = json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json jval(const MatX& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

void QuadParams::validate() const {
  if (!(m > 0.0)) fail(ErrorCode::ConfigInvalid, "params.m must be positive");
  if (!(d > 0.0)) fail(ErrorCode::ConfigInvalid, "params.d must be positive");
  if (!(ctf > 0.0)) fail(ErrorCode::ConfigInvalid, "params.ctf must be positive");
  if (!(g >= 0.0)) fail(ErrorCode::ConfigInvalid, "params.g must be non-negative");
  if (!(f_max > 0.0)) fail(ErrorCode::ConfigInvalid, "params.f_max must be positive");
  if (!(f_min < f_max)) fail(ErrorCode::ConfigInvalid, "params.f_min must be below f_max");
  if ((J - J.transpose()).norm() > 1e-12) {
    fail(ErrorCode::ConfigInvalid, "params.J must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> es(J);
  if (!(es.eigenvalues()(0) > 0.0)) {
    fail(ErrorCode::ConfigInvalid, "params.J must be positive definite");
  }
}

void ControlGains::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0.0)) fail(ErrorCode::ConfigInvalid, std::string("gains.") + name + " must be positive");
  };
  pos(kx, "kx");
  pos(kv, "kv");
  pos(kR, "kR");
  pos(kW, "kW");
  pos(c1, "c1");
  pos(c2, "c2");
  pos(gx, "gamma_x");
  pos(gR, "gamma_R");
  pos(B_theta, "B_theta");
}

void DomainConstants::validate() const {
  if (!(psi1 > 0.0 && psi1 < 1.0)) fail(ErrorCode::ConfigInvalid, "domain.psi1 must lie in (0,1)");
  if (!(psi2 > 0.0 && psi2 < 2.0)) fail(ErrorCode::ConfigInvalid, "domain.psi2 must lie in (0,2)");
  if (!(ex_max > 0.0)) fail(ErrorCode::ConfigInvalid, "domain.ex_max must be positive");
  if (!(B1 > 0.0)) fail(ErrorCode::ConfigInvalid, "domain.B1 must be positive");
  if (!(B2 >= 0.0)) fail(ErrorCode::ConfigInvalid, "domain.B2 must be non-negative");
  if (!(B_Wx > 0.0)) fail(ErrorCode::ConfigInvalid, "domain.B_Wx must be positive");
  if (!(B_theta > 0.0)) fail(ErrorCode::ConfigInvalid, "domain.B_theta must be positive");
}

double ModeSchedule::end() const { return entries.empty() ? 0.0 : entries.back().end; }

void ModeSchedule::validate() const {
  if (entries.empty()) fail(ErrorCode::ConfigInvalid, "schedule must contain at least one segment");
  if (std::abs(entries.front().start) > 1e-12) {
    fail(ErrorCode::ConfigInvalid, "schedule must start at t = 0");
  }
  for (size_t i = 0; i < entries.size(); ++i) {
    const ScheduleEntry& e = entries[i];
    if (!(e.end > e.start)) {
      fail(ErrorCode::ConfigInvalid, "schedule segment " + std::to_string(i) + " has end <= start");
    }
    if (i + 1 < entries.size() && std::abs(entries[i + 1].start - e.end) > 1e-12) {
      fail(ErrorCode::ConfigInvalid,
           "schedule segments " + std::to_string(i) + " and " + std::to_string(i + 1) +
               " are not contiguous");
    }
    bool att_gen = e.gen == GeneratorId::Flip;
    if (att_gen != (e.mode == Mode::Attitude)) {
      fail(ErrorCode::ConfigInvalid,
           "schedule segment " + std::to_string(i) + " mixes mode and generator kinds");
    }
    if (e.gen == GeneratorId::Flip && std::abs(e.flip.axis.norm() - 1.0) > 1e-12) {
      fail(ErrorCode::ConfigInvalid,
           "schedule segment " + std::to_string(i) + " flip axis must be a unit vector");
    }
    if (e.gen == GeneratorId::Hover && std::abs(e.hover.b1d.norm() - 1.0) > 1e-12) {
      fail(ErrorCode::ConfigInvalid,
           "schedule segment " + std::to_string(i) + " b1d must be a unit vector");
    }
  }
}

AttitudeCommand flip_attitude_cmd(double t, const Vec3& axis, double rate) {
  AttitudeCommand cmd;
  cmd.Rd = exp_so3(rate * t * axis);
  cmd.Wd = rate * axis;
  cmd.dWd = Vec3::Zero();
  return cmd;
}

namespace {
const Vec3 kLissajousOuter(0.2, -2.8, -1.2);
const Vec3 kLissajousInner(1.0, 0.0, -1.5);
}  // namespace

PositionCommand lissajous_position_cmd(double t) {
  PositionCommand cmd;
  cmd.b1d = Vec3::UnitX();
  if (t < 8.0) {
    cmd.xd = kLissajousOuter - (t / 8.0) * (kLissajousOuter - kLissajousInner);
    cmd.vd = -(kLissajousOuter - kLissajousInner) / 8.0;
    cmd.ad = Vec3::Zero();
    return cmd;
  }
  double s = t - 8.0;
  cmd.xd = Vec3(std::sin(s + M_PI / 2.0), std::sin(2.0 * s), -1.5);
  cmd.vd = Vec3(std::cos(s + M_PI / 2.0), 2.0 * std::cos(2.0 * s), 0.0);
  cmd.ad = Vec3(-std::sin(s + M_PI / 2.0), -4.0 * std::sin(2.0 * s), 0.0);
  return cmd;
}

PositionCommand hover_cmd(const Vec3& x_target, const Vec3& b1d) {
  PositionCommand cmd;
  cmd.xd = x_target;
  cmd.vd = Vec3::Zero();
  cmd.ad = Vec3::Zero();
  cmd.b1d = b1d;
  return cmd;
}

ActiveCommand active_command(const ModeSchedule& sched, double t) {
  if (sched.entries.empty() || t < -1e-12 || t > sched.end() + 1e-12) {
    fail(ErrorCode::OutOfSchedule,
         "t = " + std::to_string(t) + " outside schedule [0, " + std::to_string(sched.end()) + "]");
  }
  int seg = 0;
  for (size_t i = 0; i < sched.entries.size(); ++i) {
    if (t >= sched.entries[i].start - 1e-15) seg = static_cast<int>(i);
  }
  const ScheduleEntry& e = sched.entries[static_cast<size_t>(seg)];
  ActiveCommand out;
  out.segment = seg;
  out.mode = e.mode;
  switch (e.gen) {
    case GeneratorId::Flip:
      out.att = flip_attitude_cmd(t, e.flip.axis, e.flip.rate);
      break;
    case GeneratorId::Hover:
      out.pos = hover_cmd(e.hover.x_target, e.hover.b1d);
      break;
    case GeneratorId::Lissajous:
      out.pos = lissajous_position_cmd(t);
      break;
  }
  return out;
}

namespace {

ScheduleEntry parse_schedule_entry(const json& j, const std::string& where) {
  check_keys(j, where, {"mode", "start", "end", "command"});
  ScheduleEntry e;
  if (!j.contains("mode") || !j.at("mode").is_string()) cfg_fail(where, "missing string 'mode'");
  std::string mode = j.at("mode").get<std::string>();
  if (mode == "attitude") {
    e.mode = Mode::Attitude;
  } else if (mode == "position") {
    e.mode = Mode::Position;
  } else {
    cfg_fail(where + ".mode", "expected 'attitude' or 'position'");
  }
  e.start = num_req(j, "start", where);
  e.end = num_req(j, "end", where);
  if (!j.contains("command")) cfg_fail(where, "missing 'command'");
  const json& c = j.at("command");
  if (!c.is_object() || !c.contains("type") || !c.at("type").is_string()) {
    cfg_fail(where + ".command", "expected an object with a string 'type'");
  }
  std::string type = c.at("type").get<std::string>();
  if (type == "flip") {
    check_keys(c, where + ".command", {"type", "axis", "rate"});
    e.gen = GeneratorId::Flip;
    e.flip.axis = vec3(c.at("axis"), where + ".command.axis");
    e.flip.rate = num_req(c, "rate", where + ".command");
  } else if (type == "hover") {
    check_keys(c, where + ".command", {"type", "x_target", "b1d"});
    e.gen = GeneratorId::Hover;
    e.hover.x_target = vec3_or(c, "x_target", Vec3::Zero(), where + ".command");
    e.hover.b1d = vec3_or(c, "b1d", Vec3::UnitX(), where + ".command");
  } else if (type == "lissajous") {
    check_keys(c, where + ".command", {"type"});
    e.gen = GeneratorId::Lissajous;
  } else {
    cfg_fail(where + ".command.type", "unknown generator '" + type + "'");
  }
  return e;
}

}  // namespace

void ScenarioConfig::validate() const {
  params.validate();
  gains.validate();
  domain.validate();
  schedule.validate();
  if (!(dt > 0.0 && dt <= 1e-2)) fail(ErrorCode::ConfigInvalid, "dt must lie in (0, 1e-2]");
  if (!(duration > 0.0)) fail(ErrorCode::ConfigInvalid, "duration must be positive");
  if (!(wd_bound >= 0.0)) fail(ErrorCode::ConfigInvalid, "domain.wd_bound must be non-negative");
  if (!(axd_max >= 0.0)) fail(ErrorCode::ConfigInvalid, "domain.axd_max must be non-negative");
  long pdim = disturbance.theta_x.size();
  if (disturbance.theta_R.size() != pdim) {
    fail(ErrorCode::ConfigInvalid, "theta_x and theta_R must have the same dimension");
  }
  if (disturbance.Wx.rows() != 3 || disturbance.Wx.cols() != pdim || disturbance.WR.rows() != 3 ||
      disturbance.WR.cols() != pdim) {
    fail(ErrorCode::ConfigInvalid, "regressors must be 3 x P with P matching theta");
  }
  if (initial_est.theta_x.size() != pdim || initial_est.theta_R.size() != pdim) {
    fail(ErrorCode::ConfigInvalid, "initial estimates must match the parameter dimension");
  }
  if (disturbance.theta_x.norm() > gains.B_theta || disturbance.theta_R.norm() > gains.B_theta) {
    fail(ErrorCode::ConfigInvalid, "true parameter norms must not exceed B_theta");
  }
  Eigen::JacobiSVD<MatX> svd(disturbance.Wx);
  if (svd.singularValues()(0) > domain.B_Wx + 1e-12) {
    fail(ErrorCode::ConfigInvalid, "||Wx|| exceeds B_Wx");
  }
  if (!is_rotation(initial.R, 1e-9)) {
    fail(ErrorCode::ConfigInvalid, "initial attitude is not a rotation");
  }
  if (attitude_thrust.kind == ThrustPolicy::ConstF && !(attitude_thrust.f_const >= 0.0)) {
    fail(ErrorCode::ConfigInvalid, "attitude_thrust.f must be non-negative");
  }
  if (!(fd.wc_max > 0.0) || !(fd.dwc_max > 0.0)) {
    fail(ErrorCode::ConfigInvalid, "fd limits must be positive");
  }
}

ScenarioConfig parse_config(const json& j) {
  ScenarioConfig cfg;
  check_keys(j, "config",
             {"name", "dt", "duration", "adaptive", "params", "gains", "domain", "disturbance",
              "initial", "attitude_thrust", "fd", "schedule"});
  if (j.contains("name")) {
    if (!j.at("name").is_string()) cfg_fail("config.name", "expected a string");
    cfg.name = j.at("name").get<std::string>();
  } else {
    cfg.name = "scenario";
  }
  cfg.dt = num_or(j, "dt", 1e-3, "config");
  cfg.duration = num_req(j, "duration", "config");
  cfg.adaptive = bool_or(j, "adaptive", true, "config");

  if (!j.contains("params")) cfg_fail("config", "missing 'params'");
  const json& jp = j.at("params");
  check_keys(jp, "params", {"m", "J", "d", "ctf", "g", "f_min", "f_max"});
  cfg.params.m = num_req(jp, "m", "params");
  if (!jp.contains("J")) cfg_fail("params", "missing 'J'");
  MatX jraw = matx(jp.at("J"), 3, 3, "params.J");
  cfg.params.J = 0.5 * (jraw + jraw.transpose());  // symmetrize
  cfg.params.d = num_req(jp, "d", "params");
  cfg.params.ctf = num_req(jp, "ctf", "params");
  cfg.params.g = num_or(jp, "g", 9.81, "params");
  cfg.params.f_min = num_or(jp, "f_min", 0.0, "params");
  cfg.params.f_max = num_or(jp, "f_max", 3.2, "params");

  if (j.contains("disturbance")) {
    const json& jd = j.at("disturbance");
    check_keys(jd, "disturbance", {"theta_x", "theta_R", "Wx", "WR"});
    if (!jd.contains("theta_x") || !jd.contains("theta_R")) {
      cfg_fail("disturbance", "theta_x and theta_R are required");
    }
    cfg.disturbance.theta_x = vecx(jd.at("theta_x"), "disturbance.theta_x");
    cfg.disturbance.theta_R = vecx(jd.at("theta_R"), "disturbance.theta_R");
    long pdim = cfg.disturbance.theta_x.size();
    if (jd.contains("Wx")) {
      cfg.disturbance.Wx = matx(jd.at("Wx"), 3, pdim, "disturbance.Wx");
    } else if (pdim == 3) {
      cfg.disturbance.Wx = MatX::Identity(3, 3);
    } else {
      cfg_fail("disturbance", "Wx is required when P != 3");
    }
    if (jd.contains("WR")) {
      cfg.disturbance.WR = matx(jd.at("WR"), 3, pdim, "disturbance.WR");
    } else if (pdim == 3) {
      cfg.disturbance.WR = MatX::Identity(3, 3);
    } else {
      cfg_fail("disturbance", "WR is required when P != 3");
    }
  }
  long pdim = cfg.disturbance.theta_x.size();

  if (!j.contains("gains")) cfg_fail("config", "missing 'gains'");
  const json& jg = j.at("gains");
  check_keys(jg, "gains", {"kx", "kv", "kR", "kW", "c1", "c2", "gamma_x", "gamma_R", "B_theta"});
  cfg.gains.kx = num_req(jg, "kx", "gains");
  cfg.gains.kv = num_req(jg, "kv", "gains");
  cfg.gains.kR = num_req(jg, "kR", "gains");
  cfg.gains.kW = num_req(jg, "kW", "gains");
  cfg.gains.c1 = num_req(jg, "c1", "gains");
  cfg.gains.c2 = num_req(jg, "c2", "gains");
  cfg.gains.gx = num_or(jg, "gamma_x", 2.0, "gains");
  cfg.gains.gR = num_or(jg, "gamma_R", 2.0, "gains");
  double btheta_default = 1.5 * cfg.disturbance.theta_x.norm();
  cfg.gains.B_theta = num_or(jg, "B_theta", btheta_default, "gains");
  if (!(cfg.gains.B_theta > 0.0)) {
    cfg_fail("gains.B_theta", "must be positive (set it explicitly when theta_x is zero)");
  }

  const json jdom = j.contains("domain") ? j.at("domain") : json::object();
  check_keys(jdom, "domain",
             {"psi1", "psi2", "ex_max", "B_Wx", "B1", "wd_bound", "axd_max"});
  cfg.domain.psi1 = num_or(jdom, "psi1", 0.9, "domain");
  cfg.domain.psi2 = num_or(jdom, "psi2", 1.9, "domain");
  cfg.domain.ex_max = num_or(jdom, "ex_max", 2.0, "domain");
  cfg.domain.B_Wx = num_or(jdom, "B_Wx", 1.0, "domain");
  cfg.wd_bound = num_or(jdom, "wd_bound", 1.0, "domain");
  cfg.axd_max = num_or(jdom, "axd_max", 0.0, "domain");
  double b1_default = 1.1 * cfg.params.m * (cfg.params.g + cfg.axd_max);
  cfg.domain.B1 = num_or(jdom, "B1", b1_default, "domain");
  cfg.domain.B_theta = cfg.gains.B_theta;
  {
    Mat3 gyro = 2.0 * cfg.params.J - cfg.params.J.trace() * Mat3::Identity();
    Eigen::JacobiSVD<Mat3> svd(gyro);
    cfg.domain.B2 = svd.singularValues()(0) * cfg.wd_bound;
  }

  const json jinit = j.contains("initial") ? j.at("initial") : json::object();
  check_keys(jinit, "initial",
             {"x", "v", "attitude", "Omega", "theta_x_est", "theta_R_est"});
  cfg.initial.x = vec3_or(jinit, "x", Vec3::Zero(), "initial");
  cfg.initial.v = vec3_or(jinit, "v", Vec3::Zero(), "initial");
  cfg.initial.Omega = vec3_or(jinit, "Omega", Vec3::Zero(), "initial");
  if (jinit.contains("attitude")) {
    const json& ja = jinit.at("attitude");
    check_keys(ja, "initial.attitude", {"axis", "angle"});
    Vec3 axis = vec3_or(ja, "axis", Vec3::UnitX(), "initial.attitude");
    double angle = num_or(ja, "angle", 0.0, "initial.attitude");
    double n = axis.norm();
    if (angle != 0.0 && !(n > 1e-12)) {
      cfg_fail("initial.attitude", "axis must be nonzero for a nonzero angle");
    }
    cfg.initial.R = angle == 0.0 ? Mat3::Identity() : exp_so3(angle * axis / n);
  }
  cfg.initial_est.theta_x =
      jinit.contains("theta_x_est") ? vecx(jinit.at("theta_x_est"), "initial.theta_x_est")
                                    : VecX::Zero(pdim);
  cfg.initial_est.theta_R =
      jinit.contains("theta_R_est") ? vecx(jinit.at("theta_R_est"), "initial.theta_R_est")
                                    : VecX::Zero(pdim);

  if (j.contains("attitude_thrust")) {
    const json& jt = j.at("attitude_thrust");
    check_keys(jt, "attitude_thrust", {"policy", "f"});
    if (!jt.contains("policy") || !jt.at("policy").is_string()) {
      cfg_fail("attitude_thrust", "missing string 'policy'");
    }
    std::string policy = jt.at("policy").get<std::string>();
    if (policy == "alt_hold") {
      cfg.attitude_thrust.kind = ThrustPolicy::AltHold;
      if (jt.contains("f")) cfg_fail("attitude_thrust", "'f' only applies to policy 'constant'");
    } else if (policy == "constant") {
      cfg.attitude_thrust.kind = ThrustPolicy::ConstF;
      cfg.attitude_thrust.f_const = num_req(jt, "f", "attitude_thrust");
    } else {
      cfg_fail("attitude_thrust.policy", "expected 'alt_hold' or 'constant'");
    }
  }

  if (j.contains("fd")) {
    const json& jf = j.at("fd");
    check_keys(jf, "fd", {"wc_max", "dwc_max"});
    cfg.fd.wc_max = num_or(jf, "wc_max", cfg.fd.wc_max, "fd");
    cfg.fd.dwc_max = num_or(jf, "dwc_max", cfg.fd.dwc_max, "fd");
  }

  if (!j.contains("schedule") || !j.at("schedule").is_array() || j.at("schedule").empty()) {
    cfg_fail("config", "missing non-empty 'schedule' array");
  }
  const json& js = j.at("schedule");
  for (size_t i = 0; i < js.size(); ++i) {
    cfg.schedule.entries.push_back(
        parse_schedule_entry(js[i], "schedule[" + std::to_string(i) + "]"));
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigInvalid, "cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigInvalid, "JSON parse error in '" + path + "': " + e.what());
  }
  ScenarioConfig cfg = parse_config(j);
  // The last segment stretches to the requested duration.
  if (cfg.duration > cfg.schedule.end() && !cfg.schedule.entries.empty()) {
    cfg.schedule.entries.back().end = cfg.duration;
  }
  cfg.validate();
  return cfg;
}

nlohmann::json ScenarioConfig::to_json() const {
  json j;
  j["name"] = name;
  j["dt"] = dt;
  j["duration"] = duration;
  j["adaptive"] = adaptive;
  j["params"] = {{"m", params.m},       {"J", jval(MatX(params.J))}, {"d", params.d},
                 {"ctf", params.ctf},   {"g", params.g},                {"f_min", params.f_min},
                 {"f_max", params.f_max}};
  j["gains"] = {{"kx", gains.kx}, {"kv", gains.kv},       {"kR", gains.kR},
                {"kW", gains.kW}, {"c1", gains.c1},       {"c2", gains.c2},
                {"gamma_x", gains.gx}, {"gamma_R", gains.gR}, {"B_theta", gains.B_theta}};
  j["domain"] = {{"psi1", domain.psi1},   {"psi2", domain.psi2}, {"ex_max", domain.ex_max},
                 {"B_Wx", domain.B_Wx},   {"B1", domain.B1},     {"B2", domain.B2},
                 {"wd_bound", wd_bound},  {"axd_max", axd_max}};
  j["disturbance"] = {{"theta_x", jval(disturbance.theta_x)},
                      {"theta_R", jval(disturbance.theta_R)},
                      {"Wx", jval(disturbance.Wx)},
                      {"WR", jval(disturbance.WR)}};
  j["initial"] = {{"x", jval(initial.x)},
                  {"v", jval(initial.v)},
                  {"R", jval(MatX(initial.R))},
                  {"Omega", jval(initial.Omega)},
                  {"theta_x_est", jval(initial_est.theta_x)},
                  {"theta_R_est", jval(initial_est.theta_R)}};
  j["attitude_thrust"] =
      attitude_thrust.kind == ThrustPolicy::AltHold
          ? json{{"policy", "alt_hold"}}
          : json{{"policy", "constant"}, {"f", attitude_thrust.f_const}};
  j["fd"] = {{"wc_max", fd.wc_max}, {"dwc_max", fd.dwc_max}};
  json sched = json::array();
  for (const ScheduleEntry& e : schedule.entries) {
    json cmd;
    switch (e.gen) {
      case GeneratorId::Flip:
        cmd = {{"type", "flip"}, {"axis", jval(e.flip.axis)}, {"rate", e.flip.rate}};
        break;
      case GeneratorId::Hover:
        cmd = {{"type", "hover"},
               {"x_target", jval(e.hover.x_target)},
               {"b1d", jval(e.hover.b1d)}};
        break;
      case GeneratorId::Lissajous:
        cmd = {{"type", "lissajous"}};
        break;
    }
    sched.push_back({{"mode", e.mode == Mode::Attitude ? "attitude" : "position"},
                     {"start", e.start},
                     {"end", e.end},
                     {"command", cmd}});
  }
  j["schedule"] = sched;
  return j;
}

}  // namespace geoctl
