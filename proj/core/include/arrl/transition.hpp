#pragma once

#include <vector>

#include "arrl/robot_model.hpp"

namespace arrl {

class Infeasible : public KinematicsError {
public:
  using KinematicsError::KinematicsError;
};

/// One configuration along the quadruped-to-biped transition. The pose is
/// derived by grounding the lowest contact point; `support` is the x-interval
/// spanned by grounded contacts and `com_x` the composite CoM projection.
struct KeyFrame {
  Joints joints{};
  double torso_pitch = 0.0;
  Vec2 hip;             // world hip position with the lowest contact at y = 0
  double support_lo = 0.0;
  double support_hi = 0.0;
  double com_x = 0.0;   // composite CoM horizontal projection
  int phase = 0;        // 0..3, the four transition phases
};

/// The four-phase standing transition: quadruped stance, hind-leg bend until
/// the sticks touch, hand lift-off with the torso pitching up, and the final
/// standing configuration solved by standing_hip_angle. With n_keyframes > 4
/// the extra frames interpolate between phase boundaries. Every keyframe is
/// statically stable or Infeasible is thrown.
std::vector<KeyFrame> transition_sequence(const LegGeometry& geom,
                                          int n_keyframes,
                                          const MassModel& masses = MassModel{});

}  // namespace arrl
