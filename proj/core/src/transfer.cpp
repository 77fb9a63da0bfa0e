#include "arrl/transfer.hpp"

#include <algorithm>
#include <cmath>

namespace arrl {

double schedule_amplitude(double t, const ScheduleErrors& errs,
                          const TransferSchedule& sched, double prev_a) {
  if (sched.k1 * t < sched.a_set) {
    if (errs.below(sched)) return sched.k1 * t;
    return prev_a;
  }
  return sched.a_set;
}

double schedule_weight(double t, const ScheduleErrors& errs,
                       const TransferSchedule& sched, double prev_w) {
  if (sched.k2 * t < 1.0) {
    if (errs.below(sched)) return sched.k2 * t;
    return prev_w;
  }
  return 1.0;
}

void ErrorWindow::add(double e_pitch, double e_pitch_rate) {
  e_.push_back(std::abs(e_pitch));
  de_.push_back(std::abs(e_pitch_rate));
  while (static_cast<int>(e_.size()) > capacity_) {
    e_.pop_front();
    de_.pop_front();
  }
}

ScheduleErrors ErrorWindow::average() const {
  ScheduleErrors out;
  if (e_.empty()) return out;
  for (double v : e_) out.e_pitch += v;
  for (double v : de_) out.e_pitch_rate += v;
  out.e_pitch /= e_.size();
  out.e_pitch_rate /= de_.size();
  return out;
}

DynamicsPerturbation default_perturbation() {
  DynamicsPerturbation p;
  p.mass_scale = 1.2;
  p.friction_scale = 0.7;
  p.ground_stiffness_scale = 0.5;
  p.actuation_latency = 1;
  p.observation_noise_std = 0.01;
  return p;
}

TransferResult evaluate_transfer(Agent* agent, BaseController* controller,
                                 const EnvConfig& env_cfg,
                                 const TransferSchedule& sched,
                                 bool use_schedule, std::uint64_t seed) {
  BipedEnv env(env_cfg);
  TransferResult out;
  RobotState state = env.reset(seed);
  if (controller) controller->reset();

  TransferSchedule s = sched;
  if (controller && s.a_set <= 0.0) s.a_set = controller->trained_amplitude();
  ErrorWindow window(s.averaging_window);
  double prev_a = 0.0, prev_w = 0.0;

  bool done = false;
  while (!done) {
    double weight = 1.0;
    if (use_schedule && controller) {
      window.add(env.pitch_error(), env.pitch_error_rate());
      ScheduleErrors errs = window.average();
      double t = env.time();
      double a = schedule_amplitude(t, errs, s, prev_a);
      double w = schedule_weight(t, errs, s, prev_w);
      prev_a = a;
      prev_w = w;
      controller->set_amplitude_override(a);
      weight = w;
    }

    Action rl = agent ? agent->select(state, SelectMode::Exploit) : Action::zeros();
    Action executed = rl;
    if (controller) {
      Action base = controller->act(state, env.time());
      executed = residual_combine(rl, base, controller ? weight : 0.0);
    }
    StepResult sr = env.step(executed);
    out.ret += sr.reward;
    ++out.steps;
    state = sr.next_state;
    done = sr.done;
  }
  out.walk_distance = env.total_forward_distance();
  if (controller) controller->set_amplitude_override(std::nullopt);
  return out;
}

}  // namespace arrl
