#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "geoctl/alloc.hpp"
#include "geoctl/gains.hpp"
#include "geoctl/scenario.hpp"
#include "geoctl/types.hpp"

namespace geoctl {

// FNV-1a 64-bit; fingerprints configs and gain reports for log headers.
uint64_t fnv1a(std::string_view bytes);
std::string fnv1a_hex(std::string_view bytes);

// One row per controller tick, captured before the integration step.
struct LogRecord {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Rotation R = Mat3::Identity();
  Vec3 Omega = Vec3::Zero();
  double f_cmd = 0.0;
  Vec3 M_cmd = Vec3::Zero();
  RotorThrusts rotors = RotorThrusts::Zero();  // realized (post-clamp)
  Vec3 e_x = Vec3::Zero();
  Vec3 e_v = Vec3::Zero();
  Vec3 e_R = Vec3::Zero();
  Vec3 e_W = Vec3::Zero();
  double Psi = 0.0;
  VecX theta_x = VecX::Zero(3);  // estimates
  VecX theta_R = VecX::Zero(3);
  double V1 = 0.0, V2 = 0.0, V = 0.0;
  int mode = 0;    // 0 attitude, 1 position
  int domain = 0;  // 1 when the sample lies inside the verified domain
};

// Everything a log consumer needs that is not per-sample: identity hashes,
// the mixer constants for recomputing saturation, and the Lyapunov decrement
// matrix for recomputing violation counts.
struct RunMeta {
  std::string name;
  std::string config_hash;  // FNV-1a of the canonical config JSON
  std::string gain_digest;  // FNV-1a of the two gain reports
  double d = 0.0, ctf = 0.0, f_min = 0.0, f_max = 0.0;
  int p_dim = 0;
  double w11 = 0.0, w12 = 0.0, w22 = 0.0;  // decrement matrix W (symmetric)
  double psi1 = 0.9, ex_max = 2.0;
  nlohmann::json gain_report;  // {"attitude": {...}, "position": {...}}
};

struct RunLog {
  RunMeta meta;
  std::vector<LogRecord> records;
  bool diverged = false;
  std::string error;  // non-empty when diverged
};

struct SummaryMetrics {
  double terminal_ex = 0.0;
  double terminal_psi = 0.0;
  double max_psi = 0.0;
  double max_rotor_thrust = 0.0;
  double saturation_duty = 0.0;       // fraction of samples with a clamped rotor
  double steady_state_ex_mean = 0.0;  // mean ||e_x|| over the last 10 % of the run
  long lyap_violations = 0;
  long lyap_checked = 0;
  bool diverged = false;
  nlohmann::json to_json() const;
};

// Integrate the closed loop described by cfg. Mid-run failures (numerical
// divergence, degenerate commands) stop the stepping and are reported through
// the diverged flag and error string; the partial log is still returned.
RunLog run_scenario(const ScenarioConfig& cfg);

// Metrics over a finished log; throws EmptyLog when there are no records.
// Saturation is recomputed by re-mixing the commanded wrench against the
// rotor limits stored in the metadata, so a CSV round-trip summarizes
// identically to the in-memory log.
SummaryMetrics summarize(const RunLog& log);

std::string csv_string(const RunLog& log);
void write_csv(const RunLog& log, const std::string& path);
RunLog read_csv(const std::string& path);

}  // namespace geoctl
