#include "arrl/residual.hpp"

#include <algorithm>
#include <cmath>

namespace arrl {

PdCommand pd_front(double e_pitch, double e_pitch_rate, double e_yaw,
                   double e_yaw_rate, const ResidualParams& params) {
  return {params.kpp * e_pitch + params.kdp * e_pitch_rate,
          params.kpy * e_yaw + params.kdy * e_yaw_rate};
}

Action residual_combine(const Action& rl_action, const Action& base,
                        double base_weight) {
  Action out;
  for (int i = 0; i < 8; ++i) {
    out.increments[i] = std::clamp(
        rl_action.increments[i] + base_weight * base.increments[i], -1.0, 1.0);
  }
  return out;
}

BaseController::BaseController(GaitSpec spec, ResidualParams params,
                               double pitch_ref, double k_a, double control_dt)
    : spec_(std::move(spec)),
      params_(params),
      pitch_ref_(pitch_ref),
      k_a_(k_a),
      dt_(control_dt) {}

void BaseController::reset() {
  prev_pitch_.reset();
  prev_yaw_.reset();
}

Action BaseController::act(const RobotState& state, double t) {
  double e_pitch = pitch_ref_ - state.pitch;
  double e_yaw = -state.yaw;
  double e_pitch_rate = 0.0, e_yaw_rate = 0.0;
  if (prev_pitch_) {
    e_pitch_rate = -(state.pitch - *prev_pitch_) / dt_;
    e_yaw_rate = -(state.yaw - *prev_yaw_) / dt_;
  }
  prev_pitch_ = state.pitch;
  prev_yaw_ = state.yaw;

  PdCommand pd = pd_front(e_pitch, e_pitch_rate, e_yaw, e_yaw_rate, params_);

  ResidualParams p = params_;
  if (amplitude_override_) {
    double denom = p.omega * spec_.amplitude_scale;
    p.a_over_omega = *amplitude_override_ / denom;
  }

  Action a;
  auto to_unit = [&](double increment) {
    return std::clamp(increment / k_a_, -1.0, 1.0);
  };
  a.increments[kAbdL] = to_unit(pd.u_abduction);
  a.increments[kAbdR] = to_unit(pd.u_abduction);
  a.increments[kHipFL] = to_unit(pd.u_hip);
  a.increments[kHipFR] = to_unit(pd.u_hip);

  for (int side = 0; side < 2; ++side) {
    Leg leg = side == 0 ? Leg::Left : Leg::Right;
    JointAngles target = gait_joint_angles(spec_, p, t, leg);
    a.increments[kHipHL + side] =
        to_unit(target.hip_alpha1 - state.joint_angles[kHipHL + side]);
    a.increments[kKneeHL + side] =
        to_unit(target.knee_alpha2 - state.joint_angles[kKneeHL + side]);
  }
  return a;
}

}  // namespace arrl
