#pragma once

#include <memory>
#include <string>

#include "arrl/net.hpp"
#include "arrl/replay.hpp"

namespace arrl {

enum class SelectMode { Explore, Exploit };

struct RLConfig {
  double gamma = 0.99;
  int batch_size = 256;
  std::size_t buffer_capacity = 1'000'000;
  std::vector<int> hidden{256, 256};
  double actor_lr = 3e-4;
  double critic_lr = 3e-4;
  double tau = 0.005;  // target smoothing
  int warmup_steps = 1000;

  // TD3
  int policy_delay = 2;
  double target_noise_std = 0.2;
  double target_noise_clip = 0.5;
  double exploration_noise_std = 0.1;

  // SAC
  double init_temperature = 0.2;
  double entropy_target = -8.0;  // -dim(A)
  double alpha_lr = 3e-4;

  void validate() const;
};

/// Off-policy agent interface shared by TD3 and SAC. One instance per run;
/// all randomness comes from the seed handed to the constructor.
class Agent {
public:
  virtual ~Agent() = default;
  virtual Action select(const RobotState& state, SelectMode mode) = 0;
  virtual void observe(const Transition& t) = 0;
  virtual void update() = 0;
  virtual std::string kind() const = 0;
  virtual long steps_seen() const = 0;

  /// Named parameter tensors for checkpointing, e.g. {"actor.0.w", ...}.
  virtual std::vector<std::pair<std::string, Mat>> export_tensors() const = 0;
  virtual void import_tensors(
      const std::vector<std::pair<std::string, Mat>>& tensors) = 0;
};

enum class AgentKind { None, SAC, TD3 };
const char* agent_name(AgentKind k);
AgentKind agent_from_name(const std::string& name);

std::unique_ptr<Agent> make_agent(AgentKind kind, const RLConfig& cfg,
                                  std::uint64_t seed);

}  // namespace arrl
