#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

#include "geoctl/errors.hpp"
#include "geoctl/geom.hpp"
#include "geoctl/scenario.hpp"

using namespace geoctl;

namespace {

const std::string kConfigDir = GEOCTL_CONFIG_DIR;

ModeSchedule flip_then_hover() {
  ModeSchedule sched;
  ScheduleEntry e0;
  e0.mode = Mode::Attitude;
  e0.start = 0.0;
  e0.end = 0.375;
  e0.gen = GeneratorId::Flip;
  e0.flip.axis = Vec3(1.0, 1.0, 0.0).normalized();
  e0.flip.rate = 4.0 * M_PI;
  ScheduleEntry e1;
  e1.mode = Mode::Position;
  e1.start = 0.375;
  e1.end = 2.0;
  e1.gen = GeneratorId::Hover;
  sched.entries = {e0, e1};
  return sched;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

TEST_SUITE("scenario") {

  TEST_CASE("flip generator spins at a constant body rate") {
    const Vec3 axis = Vec3(1.0, 2.0, 2.0) / 3.0;
    const double rate = 3.0;

    AttitudeCommand c0 = flip_attitude_cmd(0.0, axis, rate);
    CHECK((c0.Rd - Mat3::Identity()).norm() == 0.0);
    CHECK(c0.Wd == rate * axis);
    CHECK(c0.dWd == Vec3::Zero());

    // A full revolution comes back to the start.
    AttitudeCommand cfull = flip_attitude_cmd(0.5, Vec3::UnitX(), 4.0 * M_PI);
    CHECK((cfull.Rd - Mat3::Identity()).norm() < 1e-12);

    // dRd/dt = Rd hat(Wd), checked by central differences.
    const double h = 1e-6;
    for (int i = 0; i < 20; ++i) {
      double t = 0.025 * (i + 1);
      Mat3 fd = (flip_attitude_cmd(t + h, axis, rate).Rd -
                 flip_attitude_cmd(t - h, axis, rate).Rd) /
                (2.0 * h);
      Mat3 analytic = flip_attitude_cmd(t, axis, rate).Rd * hat(rate * axis);
      CHECK((fd - analytic).norm() < 1e-6);
    }
  }

  TEST_CASE("lissajous generator ramps in and tracks the closed curve") {
    // Ramp segment: straight line from the outer to the inner point.
    PositionCommand mid = lissajous_position_cmd(4.0);
    CHECK(mid.xd.isApprox(Vec3(0.6, -1.4, -1.35), 1e-12));
    CHECK(mid.vd.isApprox(Vec3(0.1, 0.35, -0.0375), 1e-12));
    CHECK(mid.ad == Vec3::Zero());
    CHECK(mid.b1d == Vec3::UnitX());

    // Handover instant: both branches give the inner point.
    PositionCommand at8 = lissajous_position_cmd(8.0);
    CHECK(at8.xd.isApprox(Vec3(1.0, 0.0, -1.5), 1e-12));
    CHECK(lissajous_position_cmd(8.0 - 1e-9).xd.isApprox(at8.xd, 1e-7));

    PositionCommand half = lissajous_position_cmd(8.0 + M_PI);
    CHECK(half.xd.isApprox(Vec3(-1.0, 0.0, -1.5), 1e-12));
    CHECK(half.b1d == Vec3::UnitX());

    // Analytic derivatives match central differences on the curve.
    const double h = 1e-6;
    for (double t : {9.0, 12.0, 17.3, 25.0}) {
      Vec3 vfd = (lissajous_position_cmd(t + h).xd - lissajous_position_cmd(t - h).xd) / (2.0 * h);
      Vec3 afd = (lissajous_position_cmd(t + h).vd - lissajous_position_cmd(t - h).vd) / (2.0 * h);
      CHECK((vfd - lissajous_position_cmd(t).vd).norm() < 1e-6);
      CHECK((afd - lissajous_position_cmd(t).ad).norm() < 1e-6);
    }
  }

  TEST_CASE("hover generator is a constant set-point") {
    PositionCommand c = hover_cmd(Vec3(1.0, 2.0, -3.0), Vec3::UnitY());
    CHECK(c.xd == Vec3(1.0, 2.0, -3.0));
    CHECK(c.vd == Vec3::Zero());
    CHECK(c.ad == Vec3::Zero());
    CHECK(c.b1d == Vec3::UnitY());
    CHECK(hover_cmd(Vec3(1.0, 2.0, -3.0), Vec3::UnitY()).xd == c.xd);
  }

  TEST_CASE("active_command picks segments and owns its boundaries") {
    ModeSchedule sched = flip_then_hover();
    sched.validate();

    ActiveCommand a = active_command(sched, 0.2);
    CHECK(a.mode == Mode::Attitude);
    CHECK(a.segment == 0);
    CHECK(a.att.Wd.isApprox(4.0 * M_PI * Vec3(1.0, 1.0, 0.0).normalized(), 1e-15));

    // A switch instant belongs to the later interval.
    ActiveCommand b = active_command(sched, 0.375);
    CHECK(b.mode == Mode::Position);
    CHECK(b.segment == 1);

    // The final instant still belongs to the last interval.
    CHECK(active_command(sched, 2.0).segment == 1);

    CHECK_THROWS_AS(active_command(sched, 2.1), Error);
    CHECK_THROWS_AS(active_command(sched, -0.1), Error);
  }

  TEST_CASE("schedule validation rejects malformed timelines") {
    ModeSchedule ok = flip_then_hover();
    CHECK_NOTHROW(ok.validate());

    ModeSchedule empty;
    CHECK_THROWS_AS(empty.validate(), Error);

    ModeSchedule late = flip_then_hover();
    late.entries[0].start = 0.5;
    CHECK_THROWS_AS(late.validate(), Error);

    ModeSchedule inverted = flip_then_hover();
    inverted.entries[1].end = 0.1;
    CHECK_THROWS_AS(inverted.validate(), Error);

    ModeSchedule gap = flip_then_hover();
    gap.entries[1].start = 0.5;
    CHECK_THROWS_AS(gap.validate(), Error);

    // Generators are tied to modes: a flip only makes sense as an attitude
    // segment and vice versa.
    ModeSchedule wrong_gen = flip_then_hover();
    wrong_gen.entries[0].gen = GeneratorId::Hover;
    CHECK_THROWS_AS(wrong_gen.validate(), Error);

    ModeSchedule pos_flip = flip_then_hover();
    pos_flip.entries[1].gen = GeneratorId::Flip;
    CHECK_THROWS_AS(pos_flip.validate(), Error);

    ModeSchedule bad_axis = flip_then_hover();
    bad_axis.entries[0].flip.axis = Vec3(1.0, 1.0, 0.0);  // not unit
    CHECK_THROWS_AS(bad_axis.validate(), Error);

    ModeSchedule bad_b1d = flip_then_hover();
    bad_b1d.entries[1].hover.b1d = Vec3(0.0, 0.0, 0.0);
    CHECK_THROWS_AS(bad_b1d.validate(), Error);
  }

  TEST_CASE("the bundled flip config loads with materialized defaults") {
    ScenarioConfig cfg = load_config(kConfigDir + "/flip.json");
    CHECK(cfg.name == "flip");
    CHECK(cfg.params.m == 0.755);
    CHECK(cfg.duration == 2.0);
    CHECK(cfg.adaptive);
    CHECK(cfg.gains.kx == 2.0);
    CHECK(cfg.gains.B_theta == 1.2);
    CHECK(cfg.domain.B_theta == 1.2);

    // The inertia matrix is symmetrized on load.
    CHECK(cfg.params.J(0, 1) == cfg.params.J(1, 0));
    CHECK(cfg.params.J(0, 1) == doctest::Approx(0.5 * (0.0000618 + 0.00006177)).epsilon(1e-12));

    // B2 is derived from the inertia and the commanded-rate bound.
    Mat3 gyro = 2.0 * cfg.params.J - cfg.params.J.trace() * Mat3::Identity();
    Eigen::JacobiSVD<Mat3> svd(gyro);
    CHECK(cfg.domain.B2 ==
          doctest::Approx(svd.singularValues()(0) * 4.0 * M_PI).epsilon(1e-12));

    CHECK(cfg.schedule.entries.size() == 2);
    CHECK(cfg.schedule.entries[0].mode == Mode::Attitude);
    CHECK(cfg.schedule.entries[0].flip.rate == doctest::Approx(4.0 * M_PI).epsilon(1e-15));
    CHECK(cfg.schedule.end() == 2.0);

    // Unspecified blocks fall back to defaults.
    CHECK(cfg.fd.wc_max == doctest::Approx(4.0 * M_PI).epsilon(1e-15));
    CHECK(cfg.fd.dwc_max == 100.0);
    CHECK(cfg.initial.x == Vec3::Zero());
    CHECK(cfg.initial.R == Mat3::Identity());
    CHECK(cfg.initial_est.theta_x.size() == 3);
    CHECK(cfg.initial_est.theta_x.norm() == 0.0);
    CHECK(cfg.attitude_thrust.kind == ThrustPolicy::AltHold);

    CHECK_NOTHROW(cfg.validate());

    nlohmann::json eff = cfg.to_json();
    CHECK(eff.at("fd").at("wc_max").get<double>() == doctest::Approx(4.0 * M_PI));
    CHECK(eff.at("initial").at("x") == nlohmann::json({0.0, 0.0, 0.0}));
    CHECK(eff.at("domain").contains("B1"));
    CHECK(eff.at("domain").contains("B2"));
    // Serialization is deterministic.
    CHECK(eff.dump() == cfg.to_json().dump());
  }

  TEST_CASE("unknown keys are rejected anywhere in the document") {
    nlohmann::json good = load_json(kConfigDir + "/flip.json");
    CHECK_NOTHROW(parse_config(good));

    nlohmann::json top = good;
    top["extra"] = 1;
    CHECK_THROWS_AS(parse_config(top), Error);

    nlohmann::json nested = good;
    nested["params"]["windspeed"] = 1.0;
    try {
      parse_config(nested);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("ConfigInvalid") == 0);
      CHECK(std::string(e.what()).find("windspeed") != std::string::npos);
    }

    nlohmann::json sched = good;
    sched["schedule"][0]["speed"] = 2.0;
    CHECK_THROWS_AS(parse_config(sched), Error);
  }

  TEST_CASE("semantic validation runs separately from parsing") {
    nlohmann::json good = load_json(kConfigDir + "/flip.json");
    ScenarioConfig cfg = parse_config(good);

    ScenarioConfig bad_gain = cfg;
    bad_gain.gains.gx = -1.0;
    CHECK_THROWS_AS(bad_gain.validate(), Error);

    ScenarioConfig bad_dt = cfg;
    bad_dt.dt = 0.0;
    CHECK_THROWS_AS(bad_dt.validate(), Error);

    ScenarioConfig big_dt = cfg;
    big_dt.dt = 0.5;  // above the 1e-2 ceiling
    CHECK_THROWS_AS(big_dt.validate(), Error);

    ScenarioConfig bad_theta = cfg;
    bad_theta.disturbance.theta_x = 10.0 * VecX::Ones(3);  // norm above B_theta
    CHECK_THROWS_AS(bad_theta.validate(), Error);

    ScenarioConfig bad_R = cfg;
    bad_R.initial.R = 1.001 * Mat3::Identity();
    CHECK_THROWS_AS(bad_R.validate(), Error);

    ScenarioConfig bad_fmax = cfg;
    bad_fmax.params.f_max = -1.0;
    CHECK_THROWS_AS(bad_fmax.validate(), Error);
  }

  TEST_CASE("a duration past the schedule end stretches the last segment") {
    nlohmann::json doc = load_json(kConfigDir + "/flip.json");
    doc["duration"] = 3.0;
    std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / "geoctl_test_extended.json";
    {
      std::ofstream out(tmp);
      out << doc.dump(2);
    }
    ScenarioConfig cfg = load_config(tmp.string());
    CHECK(cfg.duration == 3.0);
    CHECK(cfg.schedule.end() == 3.0);
    CHECK(cfg.schedule.entries.back().end == 3.0);
    std::filesystem::remove(tmp);

    CHECK_THROWS_AS(load_config(kConfigDir + "/no_such_file.json"), Error);
  }

  TEST_CASE("the other bundled configs load and validate") {
    for (const char* name : {"lissajous.json", "recovery.json", "hover.json"}) {
      ScenarioConfig cfg = load_config(kConfigDir + "/" + name);
      CHECK_NOTHROW(cfg.validate());
      CHECK(cfg.duration > 0.0);
    }
    ScenarioConfig rec = load_config(kConfigDir + "/recovery.json");
    CHECK_FALSE(rec.adaptive);
    CHECK(psi(rec.initial.R, Mat3::Identity()) == doctest::Approx(1.0 - std::cos(2.8)));
  }
}
