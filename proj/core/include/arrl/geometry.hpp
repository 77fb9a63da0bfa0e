#pragma once

#include <stdexcept>
#include <utility>

namespace arrl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  friend Vec2 operator*(double s, Vec2 v) { return {v.x * s, v.y * s}; }
};

inline double cross2(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }  // rotate +90 deg
inline Vec2 unit_dir(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline Vec2 rotate(Vec2 v, double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

class KinematicsError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class Unreachable : public KinematicsError {
public:
  using KinematicsError::KinematicsError;
};
class DegenerateTarget : public KinematicsError {
public:
  using KinematicsError::KinematicsError;
};
class OutOfDomain : public KinematicsError {
public:
  using KinematicsError::KinematicsError;
};

/// Planar robot geometry. `stick_angle_gamma` is the angle between the hind
/// shank and the ground when the toe and the supporting stick touch the
/// ground simultaneously; `com_frac_k` places the torso CoM along the torso
/// axis measured from the hind hip.
struct LegGeometry {
  double torso_len_a = 0.35;      // hind hip to shoulder (m)
  double thigh_len_b = 0.20;      // m
  double shank_len_c = 0.20;      // m
  double stick_angle_gamma = 0.60;  // rad, in (0, pi/2)
  double com_frac_k = 0.45;       // in (0, 1]

  // Artifact extras (not part of the leg chain proper).
  double arm_len = 0.18;          // front limb, single rigid link (m)
  double stick_mount = 0.0;       // stick mount distance from knee along shank (m)

  double joint_limit_lo = -2.6;   // rad, applies to every joint
  double joint_limit_hi = 2.6;

  /// Span of the equivalent foot (toe to stick tip on the ground).
  double support_length() const;
  void validate() const;
};

struct JointAngles {
  double hip_alpha1 = 0.0;
  double knee_alpha2 = 0.0;
};

/// Foot position relative to the hip, in the leg frame. The zero pose
/// (hip = knee = 0) points the leg straight down, so y < 0 is below the hip
/// whenever the torso is level.
struct FootTarget {
  double x = 0.0;
  double y = 0.0;
};

/// Two-link forward kinematics in the leg frame.
FootTarget leg_fk(const JointAngles& angles, const LegGeometry& geom);

/// Closed-form two-link inverse kinematics. `knee_sign` selects the bend
/// branch; -1 is the robot's natural (knee-backward) direction.
JointAngles leg_ik(const FootTarget& target, const LegGeometry& geom,
                   int knee_sign = -1);

/// Projects a target radially onto the reachable annulus, then solves IK.
/// Total on all finite inputs; used by the open-loop gait path.
JointAngles leg_ik_clamped(const FootTarget& target, const LegGeometry& geom,
                           int knee_sign = -1);

/// Hip angle that centres the torso CoM over the equivalent foot for a given
/// knee angle, for the standing (bipedal) configuration.
double standing_hip_angle(double knee_alpha2, const LegGeometry& geom);

/// Interval of knee angles for which standing_hip_angle is defined, found by
/// scanning around the default stance knee angle.
std::pair<double, double> standing_knee_interval(const LegGeometry& geom);

/// The default bipedal stance: the knee angle whose standing solution puts the
/// torso exactly vertical, plus the matching hip angle and torso pitch.
struct Stance {
  JointAngles hind;
  double torso_pitch = 0.0;   // world angle of the torso axis (rad)
  FootTarget toe_offset;      // toe position relative to the hip, world-aligned
};
Stance default_stance(const LegGeometry& geom);

/// Stick tip position in the shank frame: `along` metres from the knee toward
/// the toe plus `out` metres perpendicular (+90 deg from the shank axis).
struct StickFrame {
  double along = 0.0;
  double out = 0.0;
};
StickFrame stick_frame(const LegGeometry& geom);

}  // namespace arrl
