#include <cmath>
#include <random>

#include "doctest.h"

#include "geoctl/errors.hpp"
#include "geoctl/geom.hpp"

using namespace geoctl;

namespace {

Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  return scale * Vec3(n(rng), n(rng), n(rng));
}

Vec3 random_unit(std::mt19937_64& rng) {
  Vec3 v;
  do {
    v = random_vec(rng);
  } while (v.norm() < 1e-6);
  return v.normalized();
}

}  // namespace

TEST_SUITE("geom") {

  TEST_CASE("hat lays out the cross-product matrix") {
    Mat3 h = hat(Vec3(1.0, 2.0, 3.0));
    Mat3 expect;
    expect << 0, -3, 2, 3, 0, -1, -2, 1, 0;
    CHECK((h - expect).norm() == doctest::Approx(0.0).epsilon(1e-15));

    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
      Vec3 a = random_vec(rng), b = random_vec(rng);
      CHECK((hat(a) * b - a.cross(b)).norm() <= 1e-14);
    }
  }

  TEST_CASE("vee inverts hat and rejects non-skew input") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
      Vec3 v = random_vec(rng, 3.0);
      CHECK((vee(hat(v)) - v).norm() <= 1e-14);
    }
    Mat3 not_skew = Mat3::Identity();
    CHECK_THROWS_AS(vee(not_skew), Error);
    try {
      vee(not_skew);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotSkew);
    }
    // skew_part_vee accepts anything and reads the antisymmetric part.
    Mat3 m = hat(Vec3(1, 2, 3)) + 0.5 * Mat3::Identity();
    CHECK((skew_part_vee(m) - Vec3(1, 2, 3)).norm() <= 1e-14);
  }

  TEST_CASE("exp_so3 matches axis-angle rotations") {
    Rotation r = exp_so3(Vec3(0.0, 0.0, M_PI / 2.0));
    CHECK((r * Vec3::UnitX() - Vec3::UnitY()).norm() <= 1e-12);
    CHECK((exp_so3(Vec3::Zero()) - Mat3::Identity()).norm() == 0.0);

    // Small angles take the truncated series I + K + K^2/2.
    Vec3 tiny(1e-10, 0.0, 0.0);
    Mat3 k = hat(tiny);
    CHECK((exp_so3(tiny) - (Mat3::Identity() + k + 0.5 * k * k)).norm() == 0.0);

    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
      double phi = std::uniform_real_distribution<double>(1e-6, M_PI)(rng);
      Rotation rr = exp_so3(phi * random_unit(rng));
      CHECK((rr.transpose() * rr - Mat3::Identity()).norm() <= 1e-13);
      CHECK(rr.determinant() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(rr.trace() == doctest::Approx(1.0 + 2.0 * std::cos(phi)).epsilon(1e-10));
    }
  }

  TEST_CASE("project_so3 restores orthonormality") {
    std::mt19937_64 rng(17);
    Rotation r = exp_so3(random_vec(rng));
    CHECK((project_so3(r) - r).norm() <= 1e-13);
    CHECK((project_so3(1.001 * Mat3::Identity()) - Mat3::Identity()).norm() <= 1e-13);

    for (int i = 0; i < 50; ++i) {
      Rotation base = exp_so3(random_vec(rng));
      Mat3 noisy = base + 1e-3 * Mat3::NullaryExpr([&](int, int) {
                     return std::normal_distribution<double>(0.0, 1.0)(rng);
                   });
      Rotation p = project_so3(noisy);
      CHECK((p.transpose() * p - Mat3::Identity()).norm() <= 1e-12);
      CHECK(p.determinant() > 0.0);
      CHECK((p - base).norm() <= 1e-2);
    }

    Mat3 rank_deficient = Vec3(1, 0, 0) * Vec3(1, 0, 0).transpose();
    CHECK_THROWS_AS(project_so3(rank_deficient), Error);
    Mat3 reflection = Mat3::Identity();
    reflection(2, 2) = -1.0;
    try {
      project_so3(reflection);
      CHECK_MESSAGE(false, "reflection must not project to a rotation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Degenerate);
    }
  }

  TEST_CASE("psi and e_r obey the axis-angle identities") {
    CHECK(psi(Mat3::Identity(), Mat3::Identity()) == 0.0);
    std::mt19937_64 rng(19);
    for (int i = 0; i < 200; ++i) {
      double phi = std::uniform_real_distribution<double>(0.0, M_PI)(rng);
      Vec3 s = random_unit(rng);
      Rotation r = exp_so3(phi * s);
      CHECK(psi(r, Mat3::Identity()) == doctest::Approx(1.0 - std::cos(phi)).epsilon(1e-10));
      CHECK((e_r(r, Mat3::Identity()) - std::sin(phi) * s).norm() <= 1e-10);
    }
    // Psi peaks at 2 for a half turn.
    CHECK(psi(exp_so3(M_PI * Vec3::UnitZ()), Mat3::Identity()) == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("error norms tie together: ||e_R||^2 = Psi (2 - Psi)") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 200; ++i) {
      Rotation r = exp_so3(random_vec(rng, 1.2));
      Rotation rd = exp_so3(random_vec(rng, 1.2));
      double p = psi(r, rd);
      Vec3 er = e_r(r, rd);
      CHECK(er.squaredNorm() == doctest::Approx(p * (2.0 - p)).epsilon(1e-9));
      CHECK(0.5 * er.squaredNorm() <= p + 1e-12);
      const double bound = 1.9;
      if (p < bound) {
        CHECK(p <= er.squaredNorm() / (2.0 - bound) + 1e-12);
      }
    }
  }

  TEST_CASE("e_omega compares body rates through the relative attitude") {
    std::mt19937_64 rng(29);
    Rotation r = exp_so3(random_vec(rng));
    Vec3 w(0.3, -0.2, 0.1), wd(0.05, 0.15, -0.1);
    // Same attitude: plain difference.
    CHECK((e_omega(r, w, r, wd) - (w - wd)).norm() <= 1e-13);
    Rotation rd = exp_so3(random_vec(rng));
    Vec3 expect = w - r.transpose() * rd * wd;
    CHECK((e_omega(r, w, rd, wd) - expect).norm() <= 1e-13);
  }

  TEST_CASE("is_rotation screens non-rotations") {
    CHECK(is_rotation(Mat3::Identity()));
    CHECK(is_rotation(exp_so3(Vec3(0.4, -0.2, 1.1))));
    CHECK_FALSE(is_rotation(1.001 * Mat3::Identity()));
    Mat3 reflection = Mat3::Identity();
    reflection(1, 1) = -1.0;
    CHECK_FALSE(is_rotation(reflection));
  }
}
