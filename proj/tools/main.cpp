#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "geoctl/errors.hpp"
#include "geoctl/gains.hpp"
#include "geoctl/scenario.hpp"
#include "geoctl/sim.hpp"

namespace fs = std::filesystem;
using geoctl::ErrorCode;

namespace {

// 2: the input (config, log, or command line) is unusable.
// 3: the run itself failed after a valid setup.
int exit_code_for(const geoctl::Error& e) {
  switch (e.code()) {
    case ErrorCode::ConfigInvalid:
    case ErrorCode::EmptyLog:
      return 2;
    default:
      return 3;
  }
}

nlohmann::json summary_doc(const geoctl::RunLog& log, const geoctl::SummaryMetrics& sm) {
  return {{"name", log.meta.name},
          {"config_hash", log.meta.config_hash},
          {"gain_digest", log.meta.gain_digest},
          {"summary", sm.to_json()},
          {"gain_report", log.meta.gain_report},
          {"diverged", log.diverged},
          {"error", log.error}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric adaptive flight-control scenario runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool no_adaptive = false;
  double dt_override = 0.0;
  double duration_override = 0.0;
  auto* cmd_run = app.add_subcommand(
      "run", "Integrate a scenario; writes <name>_log.csv and <name>_summary.json");
  cmd_run->add_option("config", config_path, "scenario config JSON")->required();
  cmd_run->add_option("--out", out_dir, "output directory (created if missing)");
  cmd_run->add_flag("--no-adaptive", no_adaptive, "disable the adaptive estimators");
  cmd_run->add_option("--dt", dt_override, "override the integration step, s");
  cmd_run->add_option("--duration", duration_override, "override the run duration, s");

  std::string gains_path;
  auto* cmd_gains =
      app.add_subcommand("check-gains", "Evaluate the stability conditions for a config");
  cmd_gains->add_option("config", gains_path, "scenario config JSON")->required();

  std::string log_path;
  auto* cmd_sum = app.add_subcommand("summarize", "Recompute summary metrics from a log CSV");
  cmd_sum->add_option("log", log_path, "log CSV produced by 'run'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_run->parsed()) {
      geoctl::ScenarioConfig cfg = geoctl::load_config(config_path);
      if (cmd_run->count("--no-adaptive") > 0) cfg.adaptive = false;
      if (cmd_run->count("--duration") > 0) {
        cfg.duration = duration_override;
        // A longer duration stretches the last segment; a shorter one just
        // stops the run early and leaves the schedule tail unused.
        if (!cfg.schedule.entries.empty() && cfg.duration > cfg.schedule.end()) {
          cfg.schedule.entries.back().end = cfg.duration;
        }
      }
      if (cmd_run->count("--dt") > 0) cfg.dt = dt_override;
      cfg.validate();

      geoctl::RunLog log = geoctl::run_scenario(cfg);
      geoctl::SummaryMetrics sm = geoctl::summarize(log);

      fs::create_directories(out_dir);
      const fs::path log_file = fs::path(out_dir) / (cfg.name + "_log.csv");
      const fs::path sum_file = fs::path(out_dir) / (cfg.name + "_summary.json");
      geoctl::write_csv(log, log_file.string());
      std::ofstream sout(sum_file);
      if (!sout) {
        geoctl::fail(ErrorCode::ConfigInvalid, "cannot write '" + sum_file.string() + "'");
      }
      sout << summary_doc(log, sm).dump(2) << "\n";

      std::cout << summary_doc(log, sm).dump(2) << "\n";
      if (log.diverged) {
        std::cerr << "run failed: " << log.error << "\n";
        return 3;
      }
      return 0;
    }
    if (cmd_gains->parsed()) {
      geoctl::ScenarioConfig cfg = geoctl::load_config(gains_path);
      geoctl::StabilityReport att =
          geoctl::check_attitude_gains(cfg.params, cfg.gains, cfg.wd_bound, cfg.domain.psi2);
      geoctl::StabilityReport pos =
          geoctl::check_position_gains(cfg.params, cfg.gains, cfg.domain);
      nlohmann::json doc = {
          {"name", cfg.name}, {"attitude", att.to_json()}, {"position", pos.to_json()}};
      std::cout << doc.dump(2) << "\n";
      return 0;
    }
    geoctl::RunLog log = geoctl::read_csv(log_path);
    geoctl::SummaryMetrics sm = geoctl::summarize(log);
    std::cout << summary_doc(log, sm).dump(2) << "\n";
    return 0;
  } catch (const geoctl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
