#include "arrl/biped_env.hpp"

#include <algorithm>
#include <cmath>

namespace arrl {

std::array<double, RobotState::kDim> RobotState::to_vector() const {
  std::array<double, kDim> v{};
  v[0] = roll;
  v[1] = pitch;
  v[2] = yaw;
  v[3] = ang_vel[0];
  v[4] = ang_vel[1];
  v[5] = ang_vel[2];
  for (int i = 0; i < 8; ++i) v[6 + i] = joint_angles[i];
  return v;
}

double episode_score(std::span<const double> rewards) {
  double s = 0.0;
  for (double r : rewards) s += r;
  return s;
}

BipedEnv::BipedEnv(EnvConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.geometry.validate();
  masses_ = cfg_.masses;
  mu_ = cfg_.friction_mu;
  ground_k_ = cfg_.ground_stiffness;
  apply_perturbation();

  stance_ = transition_sequence(cfg_.geometry, 4, cfg_.masses).back();
  pitch_ref_ = std::isnan(cfg_.pitch_ref) ? stance_.torso_pitch : cfg_.pitch_ref;
}

void BipedEnv::apply_perturbation() {
  if (!cfg_.perturbation) return;
  const auto& p = *cfg_.perturbation;
  masses_.m_torso *= p.mass_scale;
  masses_.i_torso *= p.mass_scale;
  masses_.m_thigh *= p.mass_scale;
  masses_.m_shank *= p.mass_scale;
  masses_.m_arm *= p.mass_scale;
  mu_ *= p.friction_scale;
  ground_k_ *= p.ground_stiffness_scale;
  latency_ = p.actuation_latency;
  obs_noise_ = p.observation_noise_std;
}

RobotPoints BipedEnv::points_at(const PhysicsState& s, Vec2* com_offset) const {
  RobotPoints at_origin = robot_points(cfg_.geometry, {0.0, 0.0}, s.pitch, s.q);
  Vec2 offset = composite_body(masses_, at_origin).com;  // CoM relative to hip
  if (com_offset) *com_offset = offset;
  Vec2 hip = s.com - offset;
  return robot_points(cfg_.geometry, hip, s.pitch, s.q);
}

RobotState BipedEnv::reset(std::uint64_t seed) {
  jitter_rng_ = Rng(seed, 0x6a69747465720001ULL);
  noise_rng_ = Rng(seed, 0x6f62736e6f697365ULL);

  Joints q = stance_.joints;
  if (cfg_.reset_jitter > 0) {
    for (double& qi : q)
      qi += jitter_rng_.uniform(-cfg_.reset_jitter, cfg_.reset_jitter);
  }

  // Ground the lowest hind contact so the robot starts resting on its feet.
  RobotPoints pts = robot_points(cfg_.geometry, {0.0, 0.0}, stance_.torso_pitch, q);
  double min_y = 1e30;
  for (int side = 0; side < 2; ++side)
    min_y = std::min({min_y, pts.toe[side].y, pts.stick[side].y});
  Vec2 hip{0.0, -min_y};
  pts = robot_points(cfg_.geometry, hip, stance_.torso_pitch, q);

  phys_ = PhysicsState{};
  phys_.pitch = stance_.torso_pitch;
  phys_.q = q;
  phys_.com = composite_body(masses_, pts).com;

  q_cmd_ = q;
  pending_.assign(static_cast<std::size_t>(latency_), Action::zeros());
  steps_ = 0;
  done_ = false;
  x_start_ = pts.torso_com.x;
  return observe();
}

RobotState BipedEnv::observe() {
  RobotState st;
  st.pitch = phys_.pitch;
  st.ang_vel[1] = phys_.pitch_rate;
  st.joint_angles = phys_.q;
  if (obs_noise_ > 0) {
    st.pitch += noise_rng_.normal(0.0, obs_noise_);
    for (double& a : st.ang_vel) a += noise_rng_.normal(0.0, obs_noise_);
    for (double& j : st.joint_angles) j += noise_rng_.normal(0.0, obs_noise_);
    st.roll = 0.0;  // planar channels stay exact zeros
    st.yaw = 0.0;
    st.ang_vel[0] = st.ang_vel[2] = 0.0;
  }
  return st;
}

BipedEnv::Derivatives BipedEnv::derivatives(const PhysicsState& s,
                                            const Joints& q_cmd) const {
  const LegGeometry& g = cfg_.geometry;
  Vec2 com_offset;
  RobotPoints pts = points_at(s, &com_offset);
  Vec2 hip = pts.hip;
  double w = s.pitch_rate;

  // Relative (hip-frame) velocities of the mass points give the CoM-offset
  // rate, which converts the CoM state velocity into the hip velocity.
  auto vel_rel = [&](Vec2 p, std::initializer_list<UpstreamJoint> joints) {
    return point_velocity_rel(p, hip, w, joints);
  };
  Vec2 r_dot{0.0, 0.0};
  double m_total = masses_.total();
  r_dot = r_dot + masses_.m_torso * vel_rel(pts.torso_com, {});
  for (int side = 0; side < 2; ++side) {
    double hip_rate = s.qd[kHipHL + side];
    double knee_rate = s.qd[kKneeHL + side];
    double arm_rate = s.qd[kHipFL + side];
    r_dot = r_dot + masses_.m_thigh *
                        vel_rel(pts.thigh_mid[side], {{hip, hip_rate}});
    r_dot = r_dot + masses_.m_shank *
                        vel_rel(pts.shank_mid[side],
                                {{hip, hip_rate}, {pts.knee[side], knee_rate}});
    r_dot = r_dot + masses_.m_arm *
                        vel_rel(pts.arm_mid[side], {{pts.shoulder, arm_rate}});
  }
  r_dot = (1.0 / m_total) * r_dot;
  Vec2 hip_vel = s.vel - r_dot;

  Composite body = composite_body(masses_, pts);

  Vec2 force{0.0, 0.0};
  double torque = 0.0;
  auto contact = [&](Vec2 p, Vec2 v_rel) {
    if (p.y >= 0.0) return;
    Vec2 v = hip_vel + v_rel;
    double fn = ground_k_ * (-p.y) - cfg_.ground_damping * v.y;
    if (fn < 0.0) fn = 0.0;
    double ft = -cfg_.friction_damping * v.x;
    double cap = mu_ * fn;
    ft = std::clamp(ft, -cap, cap);
    Vec2 f{ft, fn};
    force = force + f;
    torque += cross2(p - body.com, f);
  };

  for (int side = 0; side < 2; ++side) {
    double hip_rate = s.qd[kHipHL + side];
    double knee_rate = s.qd[kKneeHL + side];
    double arm_rate = s.qd[kHipFL + side];
    contact(pts.toe[side],
            vel_rel(pts.toe[side], {{hip, hip_rate}, {pts.knee[side], knee_rate}}));
    contact(pts.stick[side],
            vel_rel(pts.stick[side], {{hip, hip_rate}, {pts.knee[side], knee_rate}}));
    contact(pts.hand[side], vel_rel(pts.hand[side], {{pts.shoulder, arm_rate}}));
  }
  contact(pts.hip, vel_rel(pts.hip, {}));
  contact(pts.shoulder, vel_rel(pts.shoulder, {}));

  Derivatives d;
  d.acc = (1.0 / m_total) * force + Vec2{0.0, -cfg_.gravity};
  d.ang_acc = torque / body.inertia;
  if (cfg_.servo_enabled) {
    for (int j = 0; j < 8; ++j)
      d.qdd[j] = cfg_.servo_kp * (q_cmd[j] - s.q[j]) - cfg_.servo_kd * s.qd[j];
  }
  return d;
}

BipedEnv::PhysicsState BipedEnv::integrate(const PhysicsState& s,
                                           const Derivatives& d, double dt,
                                           const LegGeometry& geom) {
  // Velocity update first, position advanced with the mean velocity: exact
  // for constant acceleration, which keeps ballistic flight energy-true.
  PhysicsState n = s;
  n.vel = s.vel + dt * d.acc;
  n.com = s.com + 0.5 * dt * (s.vel + n.vel);
  n.pitch_rate = s.pitch_rate + dt * d.ang_acc;
  n.pitch = s.pitch + 0.5 * dt * (s.pitch_rate + n.pitch_rate);
  for (int j = 0; j < 8; ++j) {
    double qd_new = s.qd[j] + dt * d.qdd[j];
    n.q[j] = s.q[j] + 0.5 * dt * (s.qd[j] + qd_new);
    n.qd[j] = qd_new;
    if (n.q[j] > geom.joint_limit_hi) {
      n.q[j] = geom.joint_limit_hi;
      if (n.qd[j] > 0) n.qd[j] = 0;
    } else if (n.q[j] < geom.joint_limit_lo) {
      n.q[j] = geom.joint_limit_lo;
      if (n.qd[j] < 0) n.qd[j] = 0;
    }
  }
  return n;
}

StepResult BipedEnv::step(const Action& action) {
  if (done_) throw SteppedAfterDone("step called on a finished episode");
  for (double a : action.increments)
    if (!std::isfinite(a)) throw NonFiniteAction("non-finite action component");

  Action effective = action;
  if (latency_ > 0) {
    pending_.push_back(action);
    effective = pending_.front();
    pending_.pop_front();
  }

  bool limit_hit = false;
  for (int j = 0; j < 8; ++j) {
    double a = std::clamp(effective.increments[j], -1.0, 1.0);
    double target = phys_.q[j] + cfg_.k_a * a;
    double clipped = std::clamp(target, cfg_.geometry.joint_limit_lo,
                                cfg_.geometry.joint_limit_hi);
    if (clipped != target) limit_hit = true;
    q_cmd_[j] = clipped;
  }

  double x_before = torso_com().x;
  double dt = cfg_.control_dt / cfg_.physics_substeps;
  for (int i = 0; i < cfg_.physics_substeps; ++i) {
    Derivatives d = derivatives(phys_, q_cmd_);
    phys_ = integrate(phys_, d, dt, cfg_.geometry);
  }
  ++steps_;

  Vec2 tc = torso_com();
  RewardInfo info;
  info.height = tc.y;
  info.forward_distance = tc.x - x_before;
  double max_front = 0.0;
  for (int j = kAbdL; j <= kHipFR; ++j)
    max_front = std::max(max_front, std::abs(action.increments[j]));
  info.front_penalty = 0.25 * max_front;
  info.limit_hit = limit_hit;
  info.limit_cost = limit_hit ? 0.1 : 0.0;

  double e_pitch = pitch_error();
  done_ = std::abs(e_pitch) > cfg_.e_pitch_limit || steps_ >= cfg_.max_steps;

  StepResult res;
  res.next_state = observe();
  res.reward = info.sum();
  res.done = done_;
  res.info = info;

  if (trace_) {
    auto& os = *trace_;
    os << time();
    for (double v : res.next_state.to_vector()) os << ',' << v;
    for (double a : action.increments) os << ',' << a;
    os << ',' << res.reward << ',' << (res.done ? 1 : 0) << '\n';
  }
  return res;
}

Vec2 BipedEnv::torso_com() const {
  Vec2 com_offset;
  RobotPoints pts = points_at(phys_, &com_offset);
  return pts.torso_com;
}

double BipedEnv::total_forward_distance() const {
  return torso_com().x - x_start_;
}

double BipedEnv::mechanical_energy() const {
  RobotPoints pts = points_at(phys_);
  Composite body = composite_body(masses_, pts);
  double v2 = phys_.vel.x * phys_.vel.x + phys_.vel.y * phys_.vel.y;
  return 0.5 * body.mass * v2 + body.mass * cfg_.gravity * phys_.com.y +
         0.5 * body.inertia * phys_.pitch_rate * phys_.pitch_rate;
}

}  // namespace arrl
