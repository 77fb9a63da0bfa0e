#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "arrl/agent.hpp"
#include "arrl/bounds.hpp"
#include "arrl/gait.hpp"
#include "arrl/residual.hpp"

namespace arrl {

/// Box bounds for theta-prime, per gait kind. The omega range is the one
/// quantity the parameter table leaves open.
OptBounds theta_bounds(GaitKind kind, double omega_lo = 2.0,
                       double omega_hi = 10.0);

/// Rollout interface; the desk simulator and test stubs both implement it.
class Environment {
public:
  virtual ~Environment() = default;
  virtual RobotState reset(std::uint64_t seed) = 0;
  virtual StepResult step(const Action& action) = 0;
  virtual double time() const = 0;
  virtual double pitch_ref() const = 0;
  virtual double control_dt() const = 0;
  /// Called once per episode with the active base-controller parameters.
  virtual void on_episode_params(const ResidualParams&) {}
};

/// Environment backed by the planar simulator.
class SimEnvironment : public Environment {
public:
  explicit SimEnvironment(const EnvConfig& cfg) : env_(cfg) {}
  RobotState reset(std::uint64_t seed) override { return env_.reset(seed); }
  StepResult step(const Action& a) override { return env_.step(a); }
  double time() const override { return env_.time(); }
  double pitch_ref() const override { return env_.pitch_ref(); }
  double control_dt() const override { return env_.config().control_dt; }
  BipedEnv& sim() { return env_; }

private:
  BipedEnv env_;
};

struct TrainerConfig {
  long t_max = 300'000;      // total env steps
  int horizon = 5;           // H, episodes per optimizer evaluation
  AgentKind agent = AgentKind::TD3;
  OptimizerKind optimizer = OptimizerKind::CMAES;
  std::optional<GaitKind> gait = GaitKind::Rose;  // nullopt: no base controller
  std::uint64_t seed = 1;
  long eval_interval = 10'000;  // checkpoint cadence in env steps
  double omega_lo = 2.0, omega_hi = 10.0;
  RLConfig rl;
  EnvConfig env;

  void validate() const;
  std::string method_tag() const;  // e.g. "td3+cmaes+rose"
  std::string hash() const;        // stable config fingerprint
};

struct EpisodeRecord {
  long index = 0;
  double ret = 0.0;
  int steps = 0;
  long env_step_end = 0;  // cumulative env steps when the episode finished
  std::array<double, ResidualParams::kDim> theta{};
};

struct RunRecord {
  std::vector<EpisodeRecord> episodes;
  std::string config_hash;
  std::uint64_t seed = 0;
  double best_return = -1e300;
  std::array<double, ResidualParams::kDim> best_theta{};
  double best_theta_return = -1e300;  // best candidate mean told to the optimizer
  long total_env_steps = 0;
  long stationarity_violations = 0;
};

/// Running maximum of episode returns indexed by cumulative env step.
std::vector<std::pair<long, double>> best_so_far(const RunRecord& record);

struct EpisodeOptions {
  SelectMode mode = SelectMode::Explore;
  bool rl_updates = true;       // one agent update per env step
  bool store_transitions = true;
  double base_weight = 1.0;
};

struct EpisodeResult {
  double ret = 0.0;
  int steps = 0;
  std::vector<double> rewards;
};

/// One episode with the composite policy a_rl + base. The replay buffer
/// stores the RL action, not the executed sum.
EpisodeResult run_episode(Environment& env, Agent* agent,
                          BaseController* controller, std::uint64_t episode_seed,
                          const EpisodeOptions& opts);

struct TrainHooks {
  std::function<void(const EpisodeRecord&)> on_episode;
  /// Called every eval_interval env steps and once at the end.
  std::function<void(long env_step, const Agent*, const Optimizer*,
                     const ResidualParams&)> on_checkpoint;
};

using EnvFactory = std::function<std::unique_ptr<Environment>()>;

/// Algorithm: interleave H-episode rollouts of the composite policy (with
/// per-step RL updates) with ask/tell optimization of theta-prime on the
/// horizon-averaged return. Replay persists across theta changes.
RunRecord arrl_train(const TrainerConfig& cfg, const TrainHooks& hooks = {},
                     const EnvFactory& env_factory = {});

}  // namespace arrl
