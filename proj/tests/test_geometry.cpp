#include <cmath>

#include "doctest.h"

#include "arrl/geometry.hpp"
#include "arrl/rng.hpp"

using namespace arrl;

namespace {

LegGeometry default_geom() { return LegGeometry{}; }

// Independent CoM-projection oracle: rebuild the standing chain from raw
// trigonometry and project the torso CoM onto the ground.
double com_projection_error(double knee, double hip, const LegGeometry& g) {
  double gamma = g.stick_angle_gamma;
  Vec2 knee_pos{g.shank_len_c * std::cos(gamma), g.shank_len_c * std::sin(gamma)};
  double beta = gamma - knee;  // thigh world angle
  Vec2 hip_pos = knee_pos + g.thigh_len_b * unit_dir(beta);
  double torso_angle = beta - M_PI / 2.0 - hip;
  Vec2 com = hip_pos + g.com_frac_k * g.torso_len_a * unit_dir(torso_angle);
  return std::abs(com.x - g.support_length() / 2.0);
}

}  // namespace

TEST_CASE("leg_fk zero pose points straight down") {
  LegGeometry g = default_geom();
  FootTarget t = leg_fk({0.0, 0.0}, g);
  CHECK(t.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t.y == doctest::Approx(-(g.thigh_len_b + g.shank_len_c)).epsilon(1e-12));
}

TEST_CASE("leg_fk right-angle knee matches hand geometry") {
  LegGeometry g = default_geom();
  FootTarget t = leg_fk({0.0, M_PI / 2.0}, g);
  CHECK(t.x == doctest::Approx(g.shank_len_c).epsilon(1e-12));
  CHECK(t.y == doctest::Approx(-g.thigh_len_b).epsilon(1e-12));
}

TEST_CASE("leg_ik full extension boundary") {
  LegGeometry g = default_geom();
  JointAngles a = leg_ik({0.0, -(g.thigh_len_b + g.shank_len_c)}, g);
  CHECK(a.knee_alpha2 == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(a.hip_alpha1 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("fk-ik identity on random reachable targets") {
  LegGeometry g = default_geom();
  Rng rng(42, 0);
  double rmin = std::abs(g.thigh_len_b - g.shank_len_c) + 1e-6;
  double rmax = g.thigh_len_b + g.shank_len_c - 1e-6;
  for (int knee_sign : {-1, 1}) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      double r = rng.uniform(rmin, rmax);
      double phi = rng.uniform(-M_PI, M_PI);
      FootTarget t{r * std::sin(phi), -r * std::cos(phi)};
      FootTarget back = leg_fk(leg_ik(t, g, knee_sign), g);
      worst = std::max({worst, std::abs(back.x - t.x), std::abs(back.y - t.y)});
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("leg_ik error taxonomy") {
  LegGeometry g = default_geom();
  CHECK_THROWS_AS(leg_ik({0.0, -(g.thigh_len_b + g.shank_len_c) - 0.01}, g),
                  Unreachable);
  CHECK_THROWS_AS(leg_ik({0.0, 0.0}, g), DegenerateTarget);
  // equal-length links: annulus inner radius is zero, so only the origin fails
  CHECK_NOTHROW(leg_ik({1e-3, -1e-3}, g));
}

TEST_CASE("leg_ik_clamped projects onto the workspace") {
  LegGeometry g = default_geom();
  JointAngles a = leg_ik_clamped({0.0, -10.0}, g);
  FootTarget t = leg_fk(a, g);
  CHECK(std::hypot(t.x, t.y) ==
        doctest::Approx(g.thigh_len_b + g.shank_len_c).epsilon(1e-6));
  CHECK(t.y < 0);
}

TEST_CASE("standing hip angle centres the torso CoM over the footprint") {
  LegGeometry g = default_geom();
  auto [lo, hi] = standing_knee_interval(g);
  CHECK(lo < hi);
  double worst = 0.0;
  int evaluated = 0;
  for (int i = 0; i <= 400; ++i) {
    double knee = lo + (hi - lo) * i / 400.0;
    double hip;
    try {
      hip = standing_hip_angle(knee, g);
    } catch (const OutOfDomain&) {
      continue;
    }
    worst = std::max(worst, com_projection_error(knee, hip, g));
    ++evaluated;
  }
  CHECK(evaluated > 300);
  CHECK(worst < 1e-6);
}

TEST_CASE("standing hip angle at the arccos boundary") {
  // Geometry tuned so the arccos argument reaches exactly 1 inside the
  // feasible knee range: there alpha1 = -pi/2 - alpha2 + gamma.
  LegGeometry g = default_geom();
  g.torso_len_a = 0.2;
  g.com_frac_k = 0.2;
  double gamma = g.stick_angle_gamma;
  double q = (g.support_length() / 2.0 - g.shank_len_c * std::cos(gamma) -
              g.torso_len_a * g.com_frac_k) /
             g.thigh_len_b;
  REQUIRE(std::abs(q) <= 1.0);
  double knee = gamma - std::acos(q);
  double hip = standing_hip_angle(knee, g);
  CHECK(hip == doctest::Approx(-M_PI / 2.0 - knee + gamma).epsilon(1e-9));
}

TEST_CASE("standing hip angle rejects infeasible knee angles") {
  LegGeometry g = default_geom();
  CHECK_THROWS_AS(standing_hip_angle(g.stick_angle_gamma, g), OutOfDomain);
}

TEST_CASE("default stance is vertical and self-consistent") {
  LegGeometry g = default_geom();
  Stance s = default_stance(g);
  CHECK(s.torso_pitch == doctest::Approx(M_PI / 2.0));
  CHECK(com_projection_error(s.hind.knee_alpha2, s.hind.hip_alpha1, g) < 1e-9);
  CHECK(s.toe_offset.y < 0.0);  // toe below the hip in world coordinates
  CHECK(s.hind.knee_alpha2 < 0.0);  // knee-backward branch
  CHECK(std::abs(s.hind.hip_alpha1) < g.joint_limit_hi);
  CHECK(std::abs(s.hind.knee_alpha2) < g.joint_limit_hi);
}

TEST_CASE("geometry validation") {
  LegGeometry g = default_geom();
  g.stick_angle_gamma = 2.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = default_geom();
  g.com_frac_k = 0.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = default_geom();
  CHECK_NOTHROW(g.validate());
}
