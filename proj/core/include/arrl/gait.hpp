#pragma once

#include <optional>
#include <string>

#include "arrl/geometry.hpp"
#include "arrl/residual_params.hpp"

namespace arrl {

enum class GaitKind { Line, Sine, Rose, Triangle };
enum class Leg { Left, Right };

const char* gait_name(GaitKind k);
GaitKind gait_from_name(const std::string& name);

struct TriangleWaypoints {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
};

/// A periodic foot trajectory. (x0, y0) is the neutral foot position relative
/// to the hip, expressed in world-aligned coordinates at the reference torso
/// pitch; frame_pitch maps those coordinates into the leg frame.
struct GaitSpec {
  GaitKind kind = GaitKind::Sine;
  double x0 = 0.0;
  double y0 = -0.3;
  std::optional<TriangleWaypoints> waypoints;
  LegGeometry geometry;

  double frame_pitch = M_PI / 2.0;  // torso pitch the (x, y) frame assumes
  double amplitude_scale = 0.01;    // metres (or rad for Line) per amplitude unit

  int knee_sign = -1;

  /// Gait amplitude in metres (radians for Line) for a given parameter set.
  double amplitude(const ResidualParams& p) const {
    return p.a_over_omega * p.omega * amplitude_scale;
  }
  TriangleWaypoints resolve_waypoints(const ResidualParams& p) const;
  void validate() const;
};

/// Neutral position defaulted to the standing toe position; amplitude scale
/// defaulted per gait kind.
GaitSpec make_gait_spec(GaitKind kind, const LegGeometry& geom);

/// Foot target at time t (seconds from gait start), periodic with period
/// 2*pi/omega and C0-continuous. Line holds the neutral position.
FootTarget gait_foot_target(const GaitSpec& spec, const ResidualParams& params,
                            double t);

/// Joint angles realizing the gait; the right leg runs half a period behind.
/// Targets are projected onto the reachable workspace before the IK solve.
JointAngles gait_joint_angles(const GaitSpec& spec, const ResidualParams& params,
                              double t, Leg leg);

/// Line-gait joint offsets about the neutral pose: equal amplitude, opposite
/// directions on hip and knee.
struct LineOffsets {
  double hip = 0.0;
  double knee = 0.0;
};
LineOffsets line_joint_offsets(const GaitSpec& spec, const ResidualParams& params,
                               double t);

}  // namespace arrl
