#pragma once

#include <optional>

#include "arrl/biped_env.hpp"
#include "arrl/gait.hpp"
#include "arrl/residual_params.hpp"

namespace arrl {

struct PdCommand {
  double u_hip = 0.0;        // front hip increment, rad
  double u_abduction = 0.0;  // abduction increment, rad
};

/// Front-limb PD law on the pitch and yaw errors. Increments in radians.
PdCommand pd_front(double e_pitch, double e_pitch_rate, double e_yaw,
                   double e_yaw_rate, const ResidualParams& params);

/// Additive residual composition: rl + weight * base, clamped per channel.
Action residual_combine(const Action& rl_action, const Action& base,
                        double base_weight);

/// The parametric base policy: PD-balanced front limbs plus the open-loop
/// gait on the hind legs, emitted in increment space. Holds the previous
/// pitch/yaw sample for the backward-difference derivative; one instance per
/// rollout.
class BaseController {
public:
  BaseController(GaitSpec spec, ResidualParams params, double pitch_ref,
                 double k_a, double control_dt);

  /// Action at time t given the current observation.
  Action act(const RobotState& state, double t);
  void reset();

  const ResidualParams& params() const { return params_; }
  void set_params(const ResidualParams& p) { params_ = p; }
  const GaitSpec& spec() const { return spec_; }

  /// Gait amplitude override used by the progressive deployment schedule;
  /// nullopt restores the trained amplitude.
  void set_amplitude_override(std::optional<double> metres) {
    amplitude_override_ = metres;
  }
  double trained_amplitude() const { return spec_.amplitude(params_); }

private:
  GaitSpec spec_;
  ResidualParams params_;
  double pitch_ref_;
  double k_a_;
  double dt_;
  std::optional<double> amplitude_override_;
  std::optional<double> prev_pitch_;
  std::optional<double> prev_yaw_;
};

}  // namespace arrl
