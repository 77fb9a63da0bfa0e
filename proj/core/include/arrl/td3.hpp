#pragma once

#include "arrl/agent.hpp"

namespace arrl {

/// Twin Delayed DDPG: two critics regressing to the clipped double-Q target,
/// delayed deterministic policy updates through critic 1, Polyak-averaged
/// targets, and Gaussian noise on both exploration and the target action.
class TD3Agent : public Agent {
public:
  TD3Agent(const RLConfig& cfg, std::uint64_t seed);

  Action select(const RobotState& state, SelectMode mode) override;
  void observe(const Transition& t) override;
  void update() override;
  std::string kind() const override { return "td3"; }
  long steps_seen() const override { return steps_seen_; }

  std::vector<std::pair<std::string, Mat>> export_tensors() const override;
  void import_tensors(
      const std::vector<std::pair<std::string, Mat>>& tensors) override;

  long critic_updates() const { return critic_updates_; }
  long actor_updates() const { return actor_updates_; }
  double last_critic_loss() const { return last_critic_loss_; }
  ReplayBuffer& buffer() { return buffer_; }
  Mlp& actor() { return actor_; }

private:
  RLConfig cfg_;
  ReplayBuffer buffer_;
  Rng rng_;
  Mlp actor_, actor_target_;
  Mlp q1_, q2_, q1_target_, q2_target_;
  Adam actor_opt_, q1_opt_, q2_opt_;
  long steps_seen_ = 0;
  long critic_updates_ = 0;
  long actor_updates_ = 0;
  double last_critic_loss_ = 0.0;
};

}  // namespace arrl
