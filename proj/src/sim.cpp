#include "geoctl/sim.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <utility>

#include "geoctl/ctrl.hpp"
#include "geoctl/errors.hpp"
#include "geoctl/geom.hpp"
#include "geoctl/model.hpp"

namespace geoctl {

using nlohmann::json;

uint64_t fnv1a(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
  return buf;
}

namespace {

struct StageCtrl {
  double f = 0.0;
  Vec3 M = Vec3::Zero();
  VecX rate_x, rate_R;
};

// Control evaluated at an integration stage. The schedule segment and, in
// position mode, the finite-difference outputs (Wc, dWc) stay frozen at their
// start-of-step values; everything else is recomputed at the stage state.
StageCtrl eval_stage(const ScenarioConfig& cfg, const ScheduleEntry& seg, double t,
                     const RigidState& s, const EstimatorState& est, const Vec3& Wc,
                     const Vec3& dWc) {
  StageCtrl out;
  const long pdim = est.theta_x.size();
  out.rate_x = VecX::Zero(pdim);
  out.rate_R = VecX::Zero(pdim);
  if (seg.mode == Mode::Attitude) {
    AttitudeCommand cmd = flip_attitude_cmd(t, seg.flip.axis, seg.flip.rate);
    out.M = attitude_moment(s, cmd, est, cfg.gains, cfg.params, cfg.disturbance.WR);
    out.f = attitude_mode_thrust(cfg.attitude_thrust, s, cfg.gains, cfg.params);
    if (cfg.adaptive) {
      out.rate_R = attitude_adapt_rate(e_omega(s.R, s.Omega, cmd.Rd, cmd.Wd), e_r(s.R, cmd.Rd),
                                       cfg.disturbance.WR, cfg.gains);
    }
  } else {
    PositionCommand cmd = seg.gen == GeneratorId::Hover
                              ? hover_cmd(seg.hover.x_target, seg.hover.b1d)
                              : lissajous_position_cmd(t);
    auto [u, diag] = position_wrench(s, cmd, est, Wc, dWc, cfg.gains, cfg.params,
                                     cfg.disturbance.Wx, cfg.disturbance.WR);
    out.f = u.f;
    out.M = u.M;
    if (cfg.adaptive) {
      out.rate_x = position_adapt_rate(diag.e_x, diag.e_v, est, cfg.disturbance.Wx, cfg.gains);
      out.rate_R = attitude_adapt_rate(diag.e_W, diag.e_R, cfg.disturbance.WR, cfg.gains);
    }
  }
  return out;
}

RigidState advance(const RigidState& s, const StateDeriv& d, double h) {
  RigidState o;
  o.x = s.x + h * d.dx;
  o.v = s.v + h * d.dv;
  o.R = s.R + h * d.dR;
  o.Omega = s.Omega + h * d.dOmega;
  return o;
}

EstimatorState advance_est(const EstimatorState& e, const VecX& rx, const VecX& rR, double h) {
  EstimatorState o;
  o.theta_x = e.theta_x + h * rx;
  o.theta_R = e.theta_R + h * rR;
  return o;
}

}  // namespace

RunLog run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  StabilityReport att_rep =
      check_attitude_gains(cfg.params, cfg.gains, cfg.wd_bound, cfg.domain.psi2);
  StabilityReport pos_rep = check_position_gains(cfg.params, cfg.gains, cfg.domain);
  Eigen::Matrix2d W = decrement_matrix(cfg.params, cfg.gains, cfg.domain);

  RunLog log;
  log.meta.name = cfg.name;
  log.meta.config_hash = fnv1a_hex(cfg.to_json().dump());
  log.meta.gain_digest = fnv1a_hex(att_rep.to_json().dump() + pos_rep.to_json().dump());
  log.meta.d = cfg.params.d;
  log.meta.ctf = cfg.params.ctf;
  log.meta.f_min = cfg.params.f_min;
  log.meta.f_max = cfg.params.f_max;
  log.meta.p_dim = static_cast<int>(cfg.disturbance.theta_x.size());
  log.meta.w11 = W(0, 0);
  log.meta.w12 = W(0, 1);
  log.meta.w22 = W(1, 1);
  log.meta.psi1 = cfg.domain.psi1;
  log.meta.ex_max = cfg.domain.ex_max;
  log.meta.gain_report = {{"attitude", att_rep.to_json()}, {"position", pos_rep.to_json()}};

  const long n_steps = std::lround(cfg.duration / cfg.dt);
  if (n_steps < 1) fail(ErrorCode::ConfigInvalid, "duration spans less than one step");
  log.records.reserve(static_cast<size_t>(n_steps) + 1);

  RigidState s = cfg.initial;
  EstimatorState est = cfg.initial_est;
  ControllerMemory mem;

  try {
    for (long k = 0; k <= n_steps; ++k) {
      const double t = static_cast<double>(k) * cfg.dt;
      ActiveCommand ac = active_command(cfg.schedule, t);
      const ScheduleEntry& seg = cfg.schedule.entries[static_cast<size_t>(ac.segment)];
      if (ac.segment != mem.segment) {
        mem = ControllerMemory{};
        mem.segment = ac.segment;
      }

      LogRecord rec;
      Vec3 Wc_frozen = Vec3::Zero();
      Vec3 dWc_frozen = Vec3::Zero();
      if (seg.mode == Mode::Position) {
        auto [u, diag] =
            position_control(s, ac.pos, est, mem, cfg.gains, cfg.params, cfg.disturbance.Wx,
                             cfg.disturbance.WR, cfg.dt, cfg.fd.wc_max, cfg.fd.dwc_max);
        rec.f_cmd = u.f;
        rec.M_cmd = u.M;
        Wc_frozen = diag.Wc;
        dWc_frozen = diag.dWc;
        rec.e_x = diag.e_x;
        rec.e_v = diag.e_v;
        rec.e_R = diag.e_R;
        rec.e_W = diag.e_W;
        rec.Psi = diag.Psi;
        rec.mode = 1;
        rec.domain =
            (diag.Psi < cfg.domain.psi1 && diag.e_x.norm() < cfg.domain.ex_max) ? 1 : 0;
      } else {
        rec.M_cmd = attitude_moment(s, ac.att, est, cfg.gains, cfg.params, cfg.disturbance.WR);
        rec.f_cmd = attitude_mode_thrust(cfg.attitude_thrust, s, cfg.gains, cfg.params);
        rec.e_R = e_r(s.R, ac.att.Rd);
        rec.e_W = e_omega(s.R, s.Omega, ac.att.Rd, ac.att.Wd);
        rec.Psi = psi(s.R, ac.att.Rd);
        rec.mode = 0;
        rec.domain = rec.Psi < cfg.domain.psi2 ? 1 : 0;
      }
      LyapunovSample ly =
          lyapunov_values(rec.e_x, rec.e_v, rec.e_R, rec.e_W, rec.Psi, est, cfg.disturbance,
                          cfg.gains, cfg.params, cfg.domain, rec.mode == 1,
                          /*enforce_domain=*/false);
      rec.t = t;
      rec.x = s.x;
      rec.v = s.v;
      rec.R = s.R;
      rec.Omega = s.Omega;
      rec.rotors = realized(rec.f_cmd, rec.M_cmd, cfg.params).rotors;
      rec.theta_x = est.theta_x;
      rec.theta_R = est.theta_R;
      rec.V1 = ly.V1;
      rec.V2 = ly.V2;
      rec.V = ly.V;
      log.records.push_back(rec);

      if (k == n_steps) break;

      auto deriv = [&](double t_, const RigidState& s_, const EstimatorState& est_) {
        StageCtrl c = eval_stage(cfg, seg, t_, s_, est_, Wc_frozen, dWc_frozen);
        Realized rz = realized(c.f, c.M, cfg.params);
        StateDeriv d = dynamics_deriv(s_, ControlInput{rz.f, rz.M}, cfg.disturbance, cfg.params);
        return std::make_tuple(d, c.rate_x, c.rate_R);
      };
      const double h = cfg.dt;
      auto [d1, rx1, rR1] = deriv(t, s, est);
      auto [d2, rx2, rR2] = deriv(t + h / 2, advance(s, d1, h / 2), advance_est(est, rx1, rR1, h / 2));
      auto [d3, rx3, rR3] = deriv(t + h / 2, advance(s, d2, h / 2), advance_est(est, rx2, rR2, h / 2));
      auto [d4, rx4, rR4] = deriv(t + h, advance(s, d3, h), advance_est(est, rx3, rR3, h));

      RigidState sn;
      sn.x = s.x + h / 6.0 * (d1.dx + 2.0 * d2.dx + 2.0 * d3.dx + d4.dx);
      sn.v = s.v + h / 6.0 * (d1.dv + 2.0 * d2.dv + 2.0 * d3.dv + d4.dv);
      sn.R = s.R + h / 6.0 * (d1.dR + 2.0 * d2.dR + 2.0 * d3.dR + d4.dR);
      sn.Omega = s.Omega + h / 6.0 * (d1.dOmega + 2.0 * d2.dOmega + 2.0 * d3.dOmega + d4.dOmega);
      EstimatorState en;
      en.theta_x = est.theta_x + h / 6.0 * (rx1 + 2.0 * rx2 + 2.0 * rx3 + rx4);
      en.theta_R = est.theta_R + h / 6.0 * (rR1 + 2.0 * rR2 + 2.0 * rR3 + rR4);

      if (!state_finite(sn) || !en.theta_x.allFinite() || !en.theta_R.allFinite()) {
        fail(ErrorCode::IntegrationDiverged,
             "non-finite state after the step at t = " + std::to_string(t));
      }
      sn.R = project_so3(sn.R);
      const double nx = en.theta_x.norm();
      if (nx > cfg.gains.B_theta) en.theta_x *= cfg.gains.B_theta / nx;
      s = sn;
      est = en;
    }
  } catch (const Error& e) {
    log.diverged = true;
    log.error = e.what();
  }
  return log;
}

SummaryMetrics summarize(const RunLog& log) {
  if (log.records.empty()) fail(ErrorCode::EmptyLog, "log contains no records");
  QuadParams mixer;
  mixer.d = log.meta.d;
  mixer.ctf = log.meta.ctf;
  mixer.f_min = log.meta.f_min;
  mixer.f_max = log.meta.f_max;

  SummaryMetrics sm;
  sm.diverged = log.diverged;
  const auto& recs = log.records;
  sm.terminal_ex = recs.back().e_x.norm();
  sm.terminal_psi = recs.back().Psi;

  const double t_end = recs.back().t;
  const double window_start = 0.9 * t_end - 1e-9;
  double max_rotor = -std::numeric_limits<double>::infinity();
  double max_psi = 0.0;
  double window_acc = 0.0;
  long window_n = 0;
  long saturated = 0;

  Eigen::Matrix2d Wb;
  Wb << log.meta.w11, log.meta.w12, log.meta.w12, log.meta.w22;
  bool latched = false;
  bool prev_in = false;
  Eigen::Vector2d z_prev = Eigen::Vector2d::Zero();
  double v_prev = 0.0, t_prev = 0.0;

  for (const LogRecord& r : recs) {
    max_psi = std::max(max_psi, r.Psi);
    max_rotor = std::max(max_rotor, r.rotors.maxCoeff());
    RotorThrusts raw = mix(r.f_cmd, r.M_cmd, mixer);
    if ((raw - saturate(raw, mixer)).cwiseAbs().maxCoeff() > 0.0) ++saturated;
    if (r.t >= window_start) {
      window_acc += r.e_x.norm();
      ++window_n;
    }

    const bool in = r.mode == 1 && r.domain == 1;
    if (in && !latched) latched = true;
    if (latched && in && prev_in) {
      const double dt = r.t - t_prev;
      const double bound = -z_prev.dot(Wb * z_prev);
      const double tol = 1e-3 * std::abs(bound) + 1e-8;
      const double dv = r.V - v_prev;
      ++sm.lyap_checked;
      if (dv > tol || (dt > 0.0 && dv / dt > bound + tol)) ++sm.lyap_violations;
    }
    prev_in = in;
    z_prev(0) = std::sqrt(r.e_x.squaredNorm() + r.e_v.squaredNorm());
    z_prev(1) = std::sqrt(r.e_R.squaredNorm() + r.e_W.squaredNorm());
    v_prev = r.V;
    t_prev = r.t;
  }

  sm.max_psi = max_psi;
  sm.max_rotor_thrust = max_rotor;
  sm.saturation_duty = static_cast<double>(saturated) / static_cast<double>(recs.size());
  sm.steady_state_ex_mean = window_n > 0 ? window_acc / static_cast<double>(window_n) : 0.0;
  return sm;
}

json SummaryMetrics::to_json() const {
  return {{"terminal_ex", terminal_ex},
          {"terminal_psi", terminal_psi},
          {"max_psi", max_psi},
          {"max_rotor_thrust", max_rotor_thrust},
          {"saturation_duty", saturation_duty},
          {"steady_state_ex_mean", steady_state_ex_mean},
          {"lyapunov_violations", lyap_violations},
          {"lyapunov_checked", lyap_checked},
          {"diverged", diverged}};
}

namespace {

json header_json(const RunLog& log) {
  json h;
  h["schema"] = "geoctl-log-v1";
  h["name"] = log.meta.name;
  h["config_hash"] = log.meta.config_hash;
  h["gain_digest"] = log.meta.gain_digest;
  h["d"] = log.meta.d;
  h["ctf"] = log.meta.ctf;
  h["f_min"] = log.meta.f_min;
  h["f_max"] = log.meta.f_max;
  h["p_dim"] = log.meta.p_dim;
  h["lyap"] = {{"w11", log.meta.w11},
               {"w12", log.meta.w12},
               {"w22", log.meta.w22},
               {"psi1", log.meta.psi1},
               {"ex_max", log.meta.ex_max}};
  h["gain_report"] = log.meta.gain_report;
  h["diverged"] = log.diverged;
  h["error"] = log.error;
  return h;
}

std::string column_header(int p_dim) {
  std::string s =
      "t,x1,x2,x3,v1,v2,v3,R11,R12,R13,R21,R22,R23,R31,R32,R33,W1,W2,W3,"
      "f_cmd,M1_cmd,M2_cmd,M3_cmd,f1,f2,f3,f4,ex1,ex2,ex3,ev1,ev2,ev3,"
      "eR1,eR2,eR3,eW1,eW2,eW3,Psi";
  for (int i = 1; i <= p_dim; ++i) s += ",thx" + std::to_string(i);
  for (int i = 1; i <= p_dim; ++i) s += ",thR" + std::to_string(i);
  s += ",V1,V2,V,mode,domain";
  return s;
}

}  // namespace

std::string csv_string(const RunLog& log) {
  std::string out = "# " + header_json(log).dump() + "\n";
  out += column_header(log.meta.p_dim);
  out += '\n';
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
    out += ',';
  };
  for (const LogRecord& r : log.records) {
    put(r.t);
    for (int i = 0; i < 3; ++i) put(r.x(i));
    for (int i = 0; i < 3; ++i) put(r.v(i));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) put(r.R(i, j));
    for (int i = 0; i < 3; ++i) put(r.Omega(i));
    put(r.f_cmd);
    for (int i = 0; i < 3; ++i) put(r.M_cmd(i));
    for (int i = 0; i < 4; ++i) put(r.rotors(i));
    for (int i = 0; i < 3; ++i) put(r.e_x(i));
    for (int i = 0; i < 3; ++i) put(r.e_v(i));
    for (int i = 0; i < 3; ++i) put(r.e_R(i));
    for (int i = 0; i < 3; ++i) put(r.e_W(i));
    put(r.Psi);
    for (long i = 0; i < r.theta_x.size(); ++i) put(r.theta_x(i));
    for (long i = 0; i < r.theta_R.size(); ++i) put(r.theta_R(i));
    put(r.V1);
    put(r.V2);
    put(r.V);
    std::snprintf(buf, sizeof buf, "%d,%d\n", r.mode, r.domain);
    out += buf;
  }
  return out;
}

void write_csv(const RunLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::ConfigInvalid, "cannot open '" + path + "' for writing");
  out << csv_string(log);
  if (!out) fail(ErrorCode::ConfigInvalid, "failed writing '" + path + "'");
}

RunLog read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ConfigInvalid, "cannot open log file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    fail(ErrorCode::ConfigInvalid, "log is missing its '# {json}' header line");
  }
  json h = json::parse(line.substr(2), nullptr, false);
  if (h.is_discarded()) fail(ErrorCode::ConfigInvalid, "log header is not valid JSON");
  for (const char* key :
       {"schema", "name", "config_hash", "gain_digest", "d", "ctf", "f_min", "f_max", "p_dim",
        "lyap", "gain_report", "diverged", "error"}) {
    if (!h.contains(key)) {
      fail(ErrorCode::ConfigInvalid, std::string("log header lacks '") + key + "'");
    }
  }
  if (h.at("schema").get<std::string>() != "geoctl-log-v1") {
    fail(ErrorCode::ConfigInvalid, "unsupported log schema");
  }

  RunLog log;
  log.meta.name = h.at("name").get<std::string>();
  log.meta.config_hash = h.at("config_hash").get<std::string>();
  log.meta.gain_digest = h.at("gain_digest").get<std::string>();
  log.meta.d = h.at("d").get<double>();
  log.meta.ctf = h.at("ctf").get<double>();
  log.meta.f_min = h.at("f_min").get<double>();
  log.meta.f_max = h.at("f_max").get<double>();
  log.meta.p_dim = h.at("p_dim").get<int>();
  const json& ly = h.at("lyap");
  log.meta.w11 = ly.at("w11").get<double>();
  log.meta.w12 = ly.at("w12").get<double>();
  log.meta.w22 = ly.at("w22").get<double>();
  log.meta.psi1 = ly.at("psi1").get<double>();
  log.meta.ex_max = ly.at("ex_max").get<double>();
  log.meta.gain_report = h.at("gain_report");
  log.diverged = h.at("diverged").get<bool>();
  log.error = h.at("error").get<std::string>();
  if (log.meta.p_dim < 1) fail(ErrorCode::ConfigInvalid, "log header p_dim must be >= 1");

  if (!std::getline(in, line) || line.rfind("t,", 0) != 0) {
    fail(ErrorCode::ConfigInvalid, "log is missing its column header line");
  }
  const long pdim = log.meta.p_dim;
  const long n_cols = 45 + 2 * pdim;
  std::vector<double> vals(static_cast<size_t>(n_cols));
  long line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const char* p = line.c_str();
    for (long i = 0; i < n_cols; ++i) {
      char* end = nullptr;
      vals[static_cast<size_t>(i)] = std::strtod(p, &end);
      if (end == p || (i + 1 < n_cols && *end != ',')) {
        fail(ErrorCode::ConfigInvalid,
             "malformed log row at line " + std::to_string(line_no));
      }
      p = i + 1 < n_cols ? end + 1 : end;
    }
    LogRecord r;
    long c = 0;
    r.t = vals[c++];
    for (int i = 0; i < 3; ++i) r.x(i) = vals[c++];
    for (int i = 0; i < 3; ++i) r.v(i) = vals[c++];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.R(i, j) = vals[c++];
    for (int i = 0; i < 3; ++i) r.Omega(i) = vals[c++];
    r.f_cmd = vals[c++];
    for (int i = 0; i < 3; ++i) r.M_cmd(i) = vals[c++];
    for (int i = 0; i < 4; ++i) r.rotors(i) = vals[c++];
    for (int i = 0; i < 3; ++i) r.e_x(i) = vals[c++];
    for (int i = 0; i < 3; ++i) r.e_v(i) = vals[c++];
    for (int i = 0; i < 3; ++i) r.e_R(i) = vals[c++];
    for (int i = 0; i < 3; ++i) r.e_W(i) = vals[c++];
    r.Psi = vals[c++];
    r.theta_x = VecX(pdim);
    r.theta_R = VecX(pdim);
    for (long i = 0; i < pdim; ++i) r.theta_x(i) = vals[c++];
    for (long i = 0; i < pdim; ++i) r.theta_R(i) = vals[c++];
    r.V1 = vals[c++];
    r.V2 = vals[c++];
    r.V = vals[c++];
    r.mode = static_cast<int>(vals[c++]);
    r.domain = static_cast<int>(vals[c++]);
    log.records.push_back(r);
  }
  return log;
}

}  // namespace geoctl
