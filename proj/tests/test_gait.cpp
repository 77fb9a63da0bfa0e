#include <cmath>

#include "doctest.h"

#include "arrl/gait.hpp"
#include "arrl/rng.hpp"
#include "arrl/trainer.hpp"

using namespace arrl;

namespace {

ResidualParams mid_params(GaitKind kind) {
  ResidualParams p;
  p.a_over_omega = kind == GaitKind::Triangle ? 9.0 : 1.5;
  p.omega = 5.0;
  p.delta_x = 0.03;
  return p;
}

const GaitKind kAllGaits[] = {GaitKind::Line, GaitKind::Sine, GaitKind::Rose,
                              GaitKind::Triangle};

}  // namespace

TEST_CASE("sine anchors") {
  GaitSpec spec = make_gait_spec(GaitKind::Sine, LegGeometry{});
  ResidualParams p = mid_params(GaitKind::Sine);
  FootTarget t0 = gait_foot_target(spec, p, 0.0);
  CHECK(t0.x == doctest::Approx(spec.x0).epsilon(1e-12));
  CHECK(t0.y == doctest::Approx(spec.y0).epsilon(1e-12));

  double a = spec.amplitude(p);
  FootTarget tp = gait_foot_target(spec, p, M_PI / (2.0 * p.omega));
  CHECK(tp.x == doctest::Approx(spec.x0 + p.delta_x / 2.0).epsilon(1e-12));
  CHECK(tp.y == doctest::Approx(spec.y0 + a).epsilon(1e-12));
}

TEST_CASE("rose starts at the neutral point") {
  GaitSpec spec = make_gait_spec(GaitKind::Rose, LegGeometry{});
  ResidualParams p = mid_params(GaitKind::Rose);
  // alpha_p = pi/4 at t = 0, so cos(2 alpha_p) = 0.
  FootTarget t0 = gait_foot_target(spec, p, 0.0);
  CHECK(t0.x == doctest::Approx(spec.x0).epsilon(1e-12));
  CHECK(t0.y == doctest::Approx(spec.y0).epsilon(1e-12));
}

TEST_CASE("line gait foot position is constant") {
  GaitSpec spec = make_gait_spec(GaitKind::Line, LegGeometry{});
  ResidualParams p = mid_params(GaitKind::Line);
  for (double t = 0.0; t < 3.0; t += 0.01) {
    FootTarget ft = gait_foot_target(spec, p, t);
    CHECK(ft.x == spec.x0);  // exactly
    CHECK(ft.y == spec.y0);
  }
}

TEST_CASE("periodicity closure within 1e-9") {
  for (GaitKind kind : kAllGaits) {
    GaitSpec spec = make_gait_spec(kind, LegGeometry{});
    ResidualParams p = mid_params(kind);
    double period = 2.0 * M_PI / p.omega;
    for (double t = 0.0; t < period; t += period / 100.0) {
      FootTarget a = gait_foot_target(spec, p, t);
      FootTarget b = gait_foot_target(spec, p, t + period);
      CHECK(std::abs(a.x - b.x) < 1e-9);
      CHECK(std::abs(a.y - b.y) < 1e-9);
    }
  }
}

TEST_CASE("C0 continuity at phase boundaries and under dense sampling") {
  for (GaitKind kind : kAllGaits) {
    GaitSpec spec = make_gait_spec(kind, LegGeometry{});
    ResidualParams p = mid_params(kind);
    double w = p.omega;

    // Exact check at every phase boundary.
    const double eps = 1e-9;
    for (double tb : {M_PI / (2.0 * w), M_PI / w, 2.0 * M_PI / w}) {
      FootTarget before = gait_foot_target(spec, p, tb - eps);
      FootTarget after = gait_foot_target(spec, p, tb + eps);
      CHECK(std::abs(before.x - after.x) < 1e-6);
      CHECK(std::abs(before.y - after.y) < 1e-6);
    }

    // Velocity bound from a 10 kHz pre-pass, then 1 kHz jumps must obey it.
    double vmax = 0.0;
    double period = 2.0 * M_PI / w;
    FootTarget prev = gait_foot_target(spec, p, 0.0);
    for (double t = 1e-4; t <= period; t += 1e-4) {
      FootTarget cur = gait_foot_target(spec, p, t);
      vmax = std::max({vmax, std::abs(cur.x - prev.x) / 1e-4,
                       std::abs(cur.y - prev.y) / 1e-4});
      prev = cur;
    }
    double dt = 1e-3;
    prev = gait_foot_target(spec, p, 0.0);
    for (double t = dt; t <= 3 * period; t += dt) {
      FootTarget cur = gait_foot_target(spec, p, t);
      CHECK(std::abs(cur.x - prev.x) <= 1.2 * vmax * dt + 1e-9);
      CHECK(std::abs(cur.y - prev.y) <= 1.2 * vmax * dt + 1e-9);
      prev = cur;
    }
  }
}

TEST_CASE("swing phase lifts the foot") {
  for (GaitKind kind : kAllGaits) {
    GaitSpec spec = make_gait_spec(kind, LegGeometry{});
    ResidualParams p = mid_params(kind);
    double half = M_PI / p.omega;
    for (double t = 0.0; t < half; t += half / 200.0) {
      FootTarget ft = gait_foot_target(spec, p, t);
      CHECK(ft.y >= spec.y0 - 1e-12);
    }
  }
}

TEST_CASE("phase shift: right leg is the left leg half a period later") {
  Rng rng(5, 0);
  for (GaitKind kind : kAllGaits) {
    GaitSpec spec = make_gait_spec(kind, LegGeometry{});
    ResidualParams p = mid_params(kind);
    for (int i = 0; i < 100; ++i) {
      double t = rng.uniform(0.0, 10.0);
      JointAngles right = gait_joint_angles(spec, p, t, Leg::Right);
      JointAngles left = gait_joint_angles(spec, p, t + M_PI / p.omega, Leg::Left);
      CHECK(right.hip_alpha1 == left.hip_alpha1);
      CHECK(right.knee_alpha2 == left.knee_alpha2);
    }
  }
}

TEST_CASE("line gait moves hip and knee oppositely with equal amplitude") {
  GaitSpec spec = make_gait_spec(GaitKind::Line, LegGeometry{});
  ResidualParams p = mid_params(GaitKind::Line);
  JointAngles neutral = gait_joint_angles(spec, p, M_PI / p.omega + 1e-6, Leg::Left);
  double max_hip = 0.0, max_knee = 0.0;
  for (double t = 0.0; t < M_PI / p.omega; t += 1e-3) {
    JointAngles a = gait_joint_angles(spec, p, t, Leg::Left);
    double dh = a.hip_alpha1 - neutral.hip_alpha1;
    double dk = a.knee_alpha2 - neutral.knee_alpha2;
    CHECK(dh * dk <= 0.0);  // opposite directions
    CHECK(std::abs(dh + dk) < 1e-12);  // same amplitude
    max_hip = std::max(max_hip, std::abs(dh));
    max_knee = std::max(max_knee, std::abs(dk));
  }
  CHECK(max_hip == doctest::Approx(spec.amplitude(p)).epsilon(1e-3));
  CHECK(max_hip == doctest::Approx(max_knee).epsilon(1e-12));
}

TEST_CASE("joint limits hold across the parameter box") {
  LegGeometry geom;
  Rng rng(11, 0);
  for (GaitKind kind : kAllGaits) {
    GaitSpec spec = make_gait_spec(kind, geom);
    OptBounds b = theta_bounds(kind);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd v(7);
      for (int i = 0; i < 7; ++i) v(i) = rng.uniform(b.lo(i), b.hi(i));
      std::array<double, 7> arr;
      for (int i = 0; i < 7; ++i) arr[i] = v(i);
      ResidualParams p = ResidualParams::from_array(arr);
      double period = 2.0 * M_PI / p.omega;
      for (double t = 0.0; t < period; t += period / 64.0) {
        JointAngles a = gait_joint_angles(spec, p, t, Leg::Left);
        CHECK(a.hip_alpha1 >= geom.joint_limit_lo);
        CHECK(a.hip_alpha1 <= geom.joint_limit_hi);
        CHECK(a.knee_alpha2 >= geom.joint_limit_lo);
        CHECK(a.knee_alpha2 <= geom.joint_limit_hi);
      }
    }
  }
}

TEST_CASE("triangle requires resolvable waypoints") {
  GaitSpec spec = make_gait_spec(GaitKind::Triangle, LegGeometry{});
  ResidualParams p = mid_params(GaitKind::Triangle);
  TriangleWaypoints wp = spec.resolve_waypoints(p);
  CHECK(wp.x1 == doctest::Approx(spec.x0 + p.delta_x / 2.0));
  CHECK(wp.y1 == doctest::Approx(spec.y0 + spec.amplitude(p)));
  CHECK(wp.x2 == doctest::Approx(spec.x0 + p.delta_x));

  spec.waypoints = TriangleWaypoints{spec.x0 + 0.01, spec.y0 + 0.05, spec.x0 + 0.02};
  TriangleWaypoints own = spec.resolve_waypoints(p);
  CHECK(own.x1 == doctest::Approx(spec.x0 + 0.01));
}

TEST_CASE("gait spec validation") {
  GaitSpec spec = make_gait_spec(GaitKind::Sine, LegGeometry{});
  CHECK_NOTHROW(spec.validate());
  spec.y0 = -10.0;
  CHECK_THROWS_AS(spec.validate(), Unreachable);
}
