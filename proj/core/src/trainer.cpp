#include "arrl/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <deque>

namespace arrl {

OptBounds theta_bounds(GaitKind kind, double omega_lo, double omega_hi) {
  OptBounds b;
  b.lo.resize(7);
  b.hi.resize(7);
  double a_lo = kind == GaitKind::Triangle ? 8.0 : 0.0;
  double a_hi = kind == GaitKind::Triangle ? 11.0 : 3.0;
  b.lo << a_lo, omega_lo, 0.0, 0.0, 0.0, 0.0, 0.0;
  b.hi << a_hi, omega_hi, 0.1, 0.1, 0.1, 0.1, 0.05;
  return b;
}

void TrainerConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("TrainerConfig: horizon must be >= 1");
  if (t_max < 1) throw std::invalid_argument("TrainerConfig: t_max must be >= 1");
  if (agent == AgentKind::None && optimizer == OptimizerKind::None)
    throw std::invalid_argument("TrainerConfig: agent and optimizer cannot both be none");
  if (optimizer != OptimizerKind::None && !gait)
    throw std::invalid_argument("TrainerConfig: optimizing theta requires a gait");
  rl.validate();
}

std::string TrainerConfig::method_tag() const {
  std::string tag = agent_name(agent);
  tag += "+";
  tag += optimizer_name(optimizer);
  tag += "+";
  tag += gait ? gait_name(*gait) : "nogait";
  return tag;
}

std::string TrainerConfig::hash() const {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%ld|%d|%s|%s|%s|%ld|%.17g|%.17g|%.17g|%d|%zu|%.17g|%.17g|%d|"
                "%.17g|%d|%d|%.17g|%.17g",
                t_max, horizon, agent_name(agent), optimizer_name(optimizer),
                gait ? gait_name(*gait) : "nogait", eval_interval, omega_lo,
                omega_hi, rl.gamma, rl.batch_size, rl.buffer_capacity,
                rl.actor_lr, rl.tau, rl.warmup_steps, env.control_dt,
                env.physics_substeps, env.max_steps, env.k_a,
                env.reset_jitter);
  std::string s(buf);
  for (int h : rl.hidden) s += "," + std::to_string(h);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::vector<std::pair<long, double>> best_so_far(const RunRecord& record) {
  std::vector<std::pair<long, double>> curve;
  double best = -1e300;
  for (const auto& e : record.episodes) {
    best = std::max(best, e.ret);
    curve.emplace_back(e.env_step_end, best);
  }
  return curve;
}

EpisodeResult run_episode(Environment& env, Agent* agent,
                          BaseController* controller, std::uint64_t episode_seed,
                          const EpisodeOptions& opts) {
  EpisodeResult out;
  RobotState state = env.reset(episode_seed);
  if (controller) {
    controller->reset();
    env.on_episode_params(controller->params());
  }

  bool done = false;
  while (!done) {
    Action rl_action = agent ? agent->select(state, opts.mode) : Action::zeros();
    Action executed = rl_action;
    if (controller) {
      Action base = controller->act(state, env.time());
      executed = residual_combine(rl_action, base, opts.base_weight);
    }
    StepResult sr = env.step(executed);

    if (agent && opts.store_transitions) {
      Transition t;
      t.s = state.to_vector();
      t.a = rl_action.increments;
      t.r = sr.reward;
      t.s_next = sr.next_state.to_vector();
      t.done = sr.done;
      agent->observe(t);
      if (opts.rl_updates) agent->update();
    }

    out.rewards.push_back(sr.reward);
    out.ret += sr.reward;
    ++out.steps;
    state = sr.next_state;
    done = sr.done;
  }
  return out;
}

RunRecord arrl_train(const TrainerConfig& cfg, const TrainHooks& hooks,
                     const EnvFactory& env_factory) {
  cfg.validate();
  std::unique_ptr<Environment> env =
      env_factory ? env_factory()
                  : std::make_unique<SimEnvironment>(cfg.env);

  std::unique_ptr<Agent> agent = make_agent(cfg.agent, cfg.rl, cfg.seed);
  std::unique_ptr<Optimizer> optimizer;
  std::unique_ptr<BaseController> controller;
  Rng theta_rng(cfg.seed, 0x7468657461000001ULL);
  Rng episode_rng(cfg.seed, 0x6570697365656400ULL);

  OptBounds bounds;
  ResidualParams theta;
  if (cfg.gait) {
    bounds = theta_bounds(*cfg.gait, cfg.omega_lo, cfg.omega_hi);
    Eigen::VectorXd t0(7);
    for (int i = 0; i < 7; ++i)
      t0(i) = theta_rng.uniform(bounds.lo(i), bounds.hi(i));
    std::array<double, 7> arr;
    Eigen::Map<Eigen::VectorXd>(arr.data(), 7) = t0;
    theta = ResidualParams::from_array(arr);
    optimizer = make_optimizer(cfg.optimizer, bounds, cfg.seed);

    GaitSpec spec = make_gait_spec(*cfg.gait, cfg.env.geometry);
    Stance stance = default_stance(cfg.env.geometry);
    double pitch_ref = std::isnan(cfg.env.pitch_ref) ? stance.torso_pitch
                                                     : cfg.env.pitch_ref;
    controller = std::make_unique<BaseController>(spec, theta, pitch_ref,
                                                  cfg.env.k_a, cfg.env.control_dt);
  }

  RunRecord record;
  record.seed = cfg.seed;
  record.config_hash = cfg.hash();

  long env_steps = 0;
  long episode_index = 0;
  long next_checkpoint = cfg.eval_interval;

  std::deque<Candidate> pending;
  std::vector<double> pending_fitness;
  std::size_t asked_count = 0;

  auto set_theta = [&](const Eigen::VectorXd& v) {
    std::array<double, 7> arr;
    for (int i = 0; i < 7; ++i) arr[i] = v(i);
    theta = ResidualParams::from_array(arr);
    if (controller) controller->set_params(theta);
  };

  EpisodeOptions opts;
  opts.mode = SelectMode::Explore;
  opts.rl_updates = agent != nullptr;
  opts.store_transitions = agent != nullptr;

  while (env_steps < cfg.t_max) {
    if (optimizer && pending.empty()) {
      if (asked_count > 0) {
        optimizer->tell(pending_fitness);
        pending_fitness.clear();
      }
      auto asked = optimizer->ask();
      asked_count = asked.size();
      pending.assign(asked.begin(), asked.end());
    }
    if (optimizer) set_theta(pending.front().theta);

    // One H-episode evaluation block; theta stays fixed throughout.
    double block_sum = 0.0;
    int block_episodes = 0;
    auto block_theta = theta.to_array();
    for (int h = 0; h < cfg.horizon && env_steps < cfg.t_max; ++h) {
      if (theta.to_array() != block_theta) ++record.stationarity_violations;
      EpisodeResult er = run_episode(*env, agent.get(), controller.get(),
                                     episode_rng.engine()(), opts);
      env_steps += er.steps;
      block_sum += er.ret;
      ++block_episodes;

      EpisodeRecord rec;
      rec.index = episode_index++;
      rec.ret = er.ret;
      rec.steps = er.steps;
      rec.env_step_end = env_steps;
      rec.theta = theta.to_array();
      record.episodes.push_back(rec);
      record.best_return = std::max(record.best_return, er.ret);
      if (hooks.on_episode) hooks.on_episode(rec);

      if (env_steps >= next_checkpoint) {
        if (hooks.on_checkpoint)
          hooks.on_checkpoint(env_steps, agent.get(), optimizer.get(), theta);
        next_checkpoint += cfg.eval_interval;
      }
    }

    if (optimizer && block_episodes == cfg.horizon) {
      double mean_return = block_sum / block_episodes;
      // The trainer speaks in returns (higher is better); optimizers minimize.
      pending_fitness.push_back(-mean_return);
      if (mean_return > record.best_theta_return) {
        record.best_theta_return = mean_return;
        record.best_theta = theta.to_array();
      }
      pending.pop_front();
    } else if (!optimizer) {
      if (block_sum / std::max(1, block_episodes) > record.best_theta_return) {
        record.best_theta_return = block_sum / std::max(1, block_episodes);
        record.best_theta = theta.to_array();
      }
    }
  }

  record.total_env_steps = env_steps;
  if (hooks.on_checkpoint)
    hooks.on_checkpoint(env_steps, agent.get(), optimizer.get(), theta);
  return record;
}

}  // namespace arrl
