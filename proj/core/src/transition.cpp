#include "arrl/transition.hpp"

#include <algorithm>
#include <cmath>

namespace arrl {
namespace {

// Kinematic waypoints; a few millimetres of contact slack stands in for the
// compliance a position-controlled robot has while executing them.
constexpr double kContactTol = 0.01;

struct PathConfig {
  double pitch;
  double hip, knee, arm;
  int phase;
};

KeyFrame realize(const LegGeometry& geom, const MassModel& masses,
                 const PathConfig& c) {
  Joints q{};
  q[kHipFL] = q[kHipFR] = c.arm;
  q[kHipHL] = q[kHipHR] = c.hip;
  q[kKneeHL] = q[kKneeHR] = c.knee;

  RobotPoints pts = robot_points(geom, {0.0, 0.0}, c.pitch, q);
  double min_y = std::min({pts.toe[0].y, pts.stick[0].y, pts.hand[0].y});
  Vec2 hip{0.0, -min_y};
  pts = robot_points(geom, hip, c.pitch, q);

  KeyFrame kf;
  kf.joints = q;
  kf.torso_pitch = c.pitch;
  kf.hip = hip;
  kf.phase = c.phase;

  double lo = 1e30, hi = -1e30;
  for (Vec2 p : {pts.toe[0], pts.stick[0], pts.hand[0]}) {
    if (p.y < kContactTol) {
      lo = std::min(lo, p.x);
      hi = std::max(hi, p.x);
    }
  }
  kf.support_lo = lo;
  kf.support_hi = hi;
  kf.com_x = composite_body(masses, pts).com.x;

  if (pts.knee[0].y < -1e-6 || pts.shoulder.y < -1e-6 || pts.hip.y < -1e-6)
    throw Infeasible("transition_sequence: body segment below ground");
  return kf;
}

}  // namespace

std::vector<KeyFrame> transition_sequence(const LegGeometry& geom,
                                          int n_keyframes,
                                          const MassModel& masses) {
  if (n_keyframes < 4)
    throw std::invalid_argument("transition_sequence: need at least 4 keyframes");
  geom.validate();

  double g = geom.stick_angle_gamma;
  double b = geom.thigh_len_b, c = geom.shank_len_c, r = geom.arm_len;

  // Phase 0 anchor: quadruped stance, arms vertical, hind toes a little
  // forward so the stick stays clear of the ground.
  double x_q = 0.3 * c;
  JointAngles quad = leg_ik({x_q, -r}, geom, -1);

  // Phase 1 anchor: hind legs bent until toe and stick both touch (shank at
  // gamma) with the hands still planted.
  double cos_hip = (r - c * std::sin(g)) / b;
  if (cos_hip < -1.0 || cos_hip > 1.0)
    throw Infeasible("transition_sequence: arms cannot stay grounded at stick touch");
  double hip_b = std::acos(cos_hip);
  double knee_b = g - M_PI / 2.0 - hip_b;

  // Phase 3 anchor: the standing solution.
  Stance stance = default_stance(geom);

  double beta_b = g - knee_b;                 // thigh world angle, sticks down
  double beta_d = g - stance.hind.knee_alpha2;

  auto at = [&](double u) -> PathConfig {
    PathConfig pc{};
    pc.arm = 0.0;
    pc.phase = static_cast<int>(std::min(3.0, std::floor(u + 1e-9)));
    if (u <= 1.0) {
      pc.pitch = 0.0;
      pc.hip = quad.hip_alpha1 + u * (hip_b - quad.hip_alpha1);
      pc.knee = quad.knee_alpha2 + u * (knee_b - quad.knee_alpha2);
    } else {
      // Rock up on the equivalent foot: the shank holds the gamma contact
      // while the torso pitches to vertical.
      double s = (u - 1.0) / 2.0;
      pc.pitch = s * (M_PI / 2.0);
      double beta = beta_b + s * (beta_d - beta_b);
      pc.knee = g - beta;
      pc.hip = (g - M_PI / 2.0 - pc.pitch) - pc.knee;
    }
    return pc;
  };

  std::vector<KeyFrame> frames;
  frames.reserve(n_keyframes);
  for (int i = 0; i < n_keyframes; ++i) {
    double u = 3.0 * i / (n_keyframes - 1);
    PathConfig pc = at(u);
    KeyFrame kf = realize(geom, masses, pc);
    if (kf.support_hi - kf.support_lo < 1e-6 ||
        kf.com_x < kf.support_lo - 1e-9 || kf.com_x > kf.support_hi + 1e-9)
      throw Infeasible("transition_sequence: keyframe statically unstable");
    frames.push_back(kf);
  }
  return frames;
}

}  // namespace arrl
