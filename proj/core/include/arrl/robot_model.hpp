#pragma once

#include <array>
#include <cmath>

#include "arrl/geometry.hpp"

namespace arrl {

/// Joint vector layout shared by observations, actions and commands.
enum JointIndex : int {
  kAbdL = 0, kAbdR = 1,      // front abduction (out of plane, pass-through)
  kHipFL = 2, kHipFR = 3,    // front hips (arms)
  kHipHL = 4, kHipHR = 5,    // hind hips
  kKneeHL = 6, kKneeHR = 7,  // hind knees
};
using Joints = std::array<double, 8>;

struct MassModel {
  double m_torso = 6.0;
  double i_torso = 0.06;  // about the torso CoM, kg m^2
  double m_thigh = 0.6;   // each, lumped at the segment midpoint
  double m_shank = 0.5;   // each, stick included
  double m_arm = 0.4;     // each

  double total() const { return m_torso + 2 * (m_thigh + m_shank + m_arm); }
};

/// World positions of every named point of the planar robot for a given hind
/// hip position, torso pitch and joint vector. Legs are indexed 0 = left,
/// 1 = right; both hips coincide with `hip` in the sagittal plane.
struct RobotPoints {
  Vec2 hip;        // hind hip (torso tail)
  Vec2 shoulder;   // front hip attachment (torso head)
  Vec2 torso_com;
  std::array<Vec2, 2> knee, toe, stick, hand;
  std::array<Vec2, 2> thigh_mid, shank_mid, arm_mid;
};

inline RobotPoints robot_points(const LegGeometry& geom, Vec2 hip, double pitch,
                                const Joints& q) {
  RobotPoints pts;
  pts.hip = hip;
  Vec2 t_hat = unit_dir(pitch);
  pts.shoulder = hip + geom.torso_len_a * t_hat;
  pts.torso_com = hip + geom.com_frac_k * geom.torso_len_a * t_hat;

  StickFrame sf = stick_frame(geom);
  for (int s = 0; s < 2; ++s) {
    double phi1 = pitch + q[kHipHL + s] - M_PI / 2.0;
    double phi2 = phi1 + q[kKneeHL + s];
    pts.knee[s] = hip + geom.thigh_len_b * unit_dir(phi1);
    pts.toe[s] = pts.knee[s] + geom.shank_len_c * unit_dir(phi2);
    Vec2 u = unit_dir(phi2);
    pts.stick[s] = pts.knee[s] + sf.along * u + sf.out * perp(u);
    pts.thigh_mid[s] = 0.5 * (hip + pts.knee[s]);
    pts.shank_mid[s] = 0.5 * (pts.knee[s] + pts.toe[s]);

    double phi_a = pitch + q[kHipFL + s] - M_PI / 2.0;
    pts.hand[s] = pts.shoulder + geom.arm_len * unit_dir(phi_a);
    pts.arm_mid[s] = pts.shoulder + 0.5 * geom.arm_len * unit_dir(phi_a);
  }
  return pts;
}

struct Composite {
  double mass = 0.0;
  Vec2 com;
  double inertia = 0.0;  // about the composite CoM
};

inline Composite composite_body(const MassModel& mm, const RobotPoints& pts) {
  Composite c;
  c.mass = mm.total();
  Vec2 sum = mm.m_torso * pts.torso_com;
  for (int s = 0; s < 2; ++s) {
    sum = sum + mm.m_thigh * pts.thigh_mid[s] + mm.m_shank * pts.shank_mid[s] +
          mm.m_arm * pts.arm_mid[s];
  }
  c.com = (1.0 / c.mass) * sum;

  auto r2 = [&](Vec2 p) {
    Vec2 d = p - c.com;
    return d.x * d.x + d.y * d.y;
  };
  c.inertia = mm.i_torso + mm.m_torso * r2(pts.torso_com);
  for (int s = 0; s < 2; ++s) {
    c.inertia += mm.m_thigh * r2(pts.thigh_mid[s]) +
                 mm.m_shank * r2(pts.shank_mid[s]) + mm.m_arm * r2(pts.arm_mid[s]);
  }
  return c;
}

/// Velocity of a chain point relative to the hip frame origin: the rigid
/// rotation term plus one revolute contribution per upstream joint.
struct UpstreamJoint {
  Vec2 origin;
  double rate;
};

inline Vec2 point_velocity_rel(Vec2 p, Vec2 hip, double pitch_rate,
                               std::initializer_list<UpstreamJoint> joints) {
  Vec2 v = pitch_rate * perp(p - hip);
  for (const auto& j : joints) v = v + j.rate * perp(p - j.origin);
  return v;
}

}  // namespace arrl
