#pragma once

#include <array>
#include <deque>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "arrl/rng.hpp"
#include "arrl/robot_model.hpp"
#include "arrl/transition.hpp"

namespace arrl {

class EnvError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class SteppedAfterDone : public EnvError {
public:
  using EnvError::EnvError;
};
class NonFiniteAction : public EnvError {
public:
  using EnvError::EnvError;
};

/// The 14-dimensional observation: torso attitude, torso angular rates and
/// the eight joint angles. The model is sagittal, so roll, yaw and their
/// rates are identically zero.
struct RobotState {
  double roll = 0.0, pitch = 0.0, yaw = 0.0;
  std::array<double, 3> ang_vel{};  // roll, pitch, yaw rates
  Joints joint_angles{};

  static constexpr int kDim = 14;
  std::array<double, kDim> to_vector() const;
};

struct Action {
  std::array<double, 8> increments{};  // policy outputs in [-1, 1] per channel

  static Action zeros() { return {}; }
};

struct DynamicsPerturbation {
  double mass_scale = 1.0;
  double friction_scale = 1.0;
  double ground_stiffness_scale = 1.0;
  int actuation_latency = 0;          // whole control steps
  double observation_noise_std = 0.0;  // per observation channel
};

struct EnvConfig {
  LegGeometry geometry;
  MassModel masses;

  double control_dt = 0.02;   // s; 1000 steps = 20 s episodes
  int physics_substeps = 10;
  int max_steps = 1000;
  double k_a = 0.05;          // rad of commanded increment per unit action
  double gravity = 9.81;

  double ground_stiffness = 1e4;   // N/m
  double ground_damping = 100.0;   // N s/m
  double friction_mu = 0.8;
  double friction_damping = 300.0;  // tangential N s/m before the Coulomb cap

  double servo_kp = 400.0;  // 1/s^2, position-servo actuators
  double servo_kd = 40.0;   // 1/s
  bool servo_enabled = true;

  double e_pitch_limit = 0.65;  // rad
  double pitch_ref = std::numeric_limits<double>::quiet_NaN();  // default: stance pitch
  double reset_jitter = 0.02;   // rad, uniform on every joint

  std::optional<DynamicsPerturbation> perturbation;

  double episode_seconds() const { return control_dt * max_steps; }
};

struct RewardInfo {
  double height = 0.0;            // torso CoM height, m
  double forward_distance = 0.0;  // torso CoM advance this step, m
  double front_penalty = 0.0;     // 0.25 * max |front action|
  double limit_cost = 0.0;        // 0.1 when a commanded target clipped
  double living_bonus = 0.5;
  bool limit_hit = false;

  double sum() const {
    return height - front_penalty + forward_distance - limit_cost + living_bonus;
  }
};

struct StepResult {
  RobotState next_state;
  double reward = 0.0;
  bool done = false;
  RewardInfo info;
};

/// Exact sum of a reward trace (the paper scores an episode by the plain sum).
double episode_score(std::span<const double> rewards);

/// Planar rigid-body simulation of the bipedal-mode robot. The torso plus
/// limb point masses form a composite body whose CoM and inertia follow the
/// joint configuration; limbs are massless appendages driven by position
/// servos, and ground contact is a spring-damper penalty with a Coulomb
/// friction cap.
class BipedEnv {
public:
  struct PhysicsState {
    Vec2 com;          // composite CoM
    Vec2 vel;
    double pitch = 0.0;
    double pitch_rate = 0.0;
    Joints q{};
    Joints qd{};
  };
  struct Derivatives {
    Vec2 acc;
    double ang_acc = 0.0;
    Joints qdd{};
  };

  explicit BipedEnv(EnvConfig cfg);

  RobotState reset(std::uint64_t seed);
  StepResult step(const Action& action);

  bool done() const { return done_; }
  int steps() const { return steps_; }
  double time() const { return steps_ * cfg_.control_dt; }
  double total_forward_distance() const;
  double pitch_error() const { return pitch_ref_ - phys_.pitch; }
  double pitch_error_rate() const { return -phys_.pitch_rate; }
  double pitch_ref() const { return pitch_ref_; }
  const EnvConfig& config() const { return cfg_; }
  RobotState observe();

  /// Force model; public so tests can integrate it independently.
  Derivatives derivatives(const PhysicsState& s, const Joints& q_cmd) const;
  static PhysicsState integrate(const PhysicsState& s, const Derivatives& d,
                                double dt, const LegGeometry& geom);

  const PhysicsState& physics() const { return phys_; }
  void set_physics(const PhysicsState& s) { phys_ = s; }
  void set_pitch(double pitch) { phys_.pitch = pitch; }
  const Joints& commanded_targets() const { return q_cmd_; }

  double mechanical_energy() const;
  Vec2 torso_com() const;
  const KeyFrame& stance_frame() const { return stance_; }

  /// Optional per-step trajectory sink: t, state x14, action x8, reward, done.
  void set_trace(std::ostream* os) { trace_ = os; }

private:
  void apply_perturbation();
  RobotPoints points_at(const PhysicsState& s, Vec2* com_offset = nullptr) const;

  EnvConfig cfg_;
  MassModel masses_;       // after perturbation scaling
  double mu_ = 0.8;
  double ground_k_ = 1e4;
  int latency_ = 0;
  double obs_noise_ = 0.0;

  KeyFrame stance_;
  double pitch_ref_ = M_PI / 2.0;

  PhysicsState phys_;
  Joints q_cmd_{};
  std::deque<Action> pending_;  // actuation latency queue
  Rng jitter_rng_;
  Rng noise_rng_;
  bool done_ = true;
  int steps_ = 0;
  double x_start_ = 0.0;
  std::ostream* trace_ = nullptr;
};

}  // namespace arrl
