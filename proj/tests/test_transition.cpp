#include <cmath>

#include "doctest.h"

#include "arrl/transition.hpp"

using namespace arrl;

namespace {

// Oracle: recompute the composite CoM and the grounded support interval for a
// keyframe from raw trigonometry, independent of robot_model.
struct OraclePoints {
  double com_x;
  double lo, hi;
  int grounded;
};

OraclePoints oracle(const LegGeometry& g, const MassModel& mm,
                    const KeyFrame& kf) {
  double th = kf.torso_pitch;
  double hx = kf.hip.x, hy = kf.hip.y;
  double a1 = kf.joints[kHipHL], a2 = kf.joints[kKneeHL];
  double af = kf.joints[kHipFL];

  double p1 = th + a1 - M_PI / 2.0;
  double p2 = p1 + a2;
  double kx = hx + g.thigh_len_b * std::cos(p1);
  double ky = hy + g.thigh_len_b * std::sin(p1);
  double tx = kx + g.shank_len_c * std::cos(p2);
  double ty = ky + g.shank_len_c * std::sin(p2);
  double bs = (g.shank_len_c - g.stick_mount) * std::tan(g.stick_angle_gamma);
  double sx = kx + g.stick_mount * std::cos(p2) - bs * std::sin(p2);
  double sy = ky + g.stick_mount * std::sin(p2) + bs * std::cos(p2);

  double fx = hx + g.torso_len_a * std::cos(th);
  double fy = hy + g.torso_len_a * std::sin(th);
  double pa = th + af - M_PI / 2.0;
  double handx = fx + g.arm_len * std::cos(pa);
  double handy = fy + g.arm_len * std::sin(pa);

  double tcx = hx + g.com_frac_k * g.torso_len_a * std::cos(th);
  double thighx = (hx + kx) / 2.0, shankx = (kx + tx) / 2.0;
  double armx = fx + 0.5 * g.arm_len * std::cos(pa);
  double m = mm.m_torso + 2 * (mm.m_thigh + mm.m_shank + mm.m_arm);
  double comx = (mm.m_torso * tcx + 2 * mm.m_thigh * thighx +
                 2 * mm.m_shank * shankx + 2 * mm.m_arm * armx) /
                m;

  OraclePoints out{comx, 1e300, -1e300, 0};
  for (auto [px, py] : {std::pair{tx, ty}, {sx, sy}, {handx, handy}}) {
    if (py < 0.011) {
      out.lo = std::min(out.lo, px);
      out.hi = std::max(out.hi, px);
      ++out.grounded;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("four keyframes are the four phases") {
  auto frames = transition_sequence(LegGeometry{}, 4);
  REQUIRE(frames.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(frames[i].phase == i);
  CHECK(frames[0].torso_pitch == doctest::Approx(0.0));
  CHECK(frames[3].torso_pitch == doctest::Approx(M_PI / 2.0));
}

TEST_CASE("final keyframe satisfies the standing solution") {
  LegGeometry g;
  auto frames = transition_sequence(g, 4);
  const KeyFrame& last = frames.back();
  double hip = standing_hip_angle(last.joints[kKneeHL], g);
  CHECK(last.joints[kHipHL] == doctest::Approx(hip).epsilon(1e-9));
  Stance s = default_stance(g);
  CHECK(last.joints[kKneeHL] == doctest::Approx(s.hind.knee_alpha2).epsilon(1e-9));
}

TEST_CASE("every keyframe is statically stable per the oracle") {
  LegGeometry g;
  MassModel mm;
  for (int n : {4, 7, 13}) {
    auto frames = transition_sequence(g, n, mm);
    REQUIRE(static_cast<int>(frames.size()) == n);
    for (const KeyFrame& kf : frames) {
      OraclePoints o = oracle(g, mm, kf);
      CHECK(o.grounded >= 1);
      CHECK(o.hi - o.lo > 1e-6);
      CHECK(o.com_x >= o.lo - 1e-9);
      CHECK(o.com_x <= o.hi + 1e-9);
      CHECK(std::abs(o.com_x - kf.com_x) < 1e-9);  // matches the module's value
    }
  }
}

TEST_CASE("pitch increases monotonically through the rock-up") {
  auto frames = transition_sequence(LegGeometry{}, 10);
  for (std::size_t i = 1; i < frames.size(); ++i)
    CHECK(frames[i].torso_pitch >= frames[i - 1].torso_pitch - 1e-12);
}

TEST_CASE("fewer than four keyframes is rejected") {
  CHECK_THROWS_AS(transition_sequence(LegGeometry{}, 3), std::invalid_argument);
}
