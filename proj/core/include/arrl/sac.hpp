#pragma once

#include "arrl/agent.hpp"

namespace arrl {

/// Soft Actor-Critic with a squashed-Gaussian policy, clipped double-Q
/// critics on the entropy-augmented target, and automatic temperature tuning
/// toward a fixed entropy target.
class SACAgent : public Agent {
public:
  SACAgent(const RLConfig& cfg, std::uint64_t seed);

  Action select(const RobotState& state, SelectMode mode) override;
  void observe(const Transition& t) override;
  void update() override;
  std::string kind() const override { return "sac"; }
  long steps_seen() const override { return steps_seen_; }

  std::vector<std::pair<std::string, Mat>> export_tensors() const override;
  void import_tensors(
      const std::vector<std::pair<std::string, Mat>>& tensors) override;

  double temperature() const { return std::exp(log_alpha_); }
  void set_temperature(double alpha, bool freeze) {
    log_alpha_ = std::log(alpha);
    alpha_frozen_ = freeze;
  }
  double last_entropy_estimate() const { return last_entropy_; }
  ReplayBuffer& buffer() { return buffer_; }

  /// Log density of the squashed Gaussian at action a for head outputs
  /// (mean, log_std); exposed for the quadrature check.
  static double squashed_log_prob(double mean, double log_std, double action);

private:
  struct Sampled {
    Mat a;        // tanh(u)
    Mat u;        // pre-squash sample
    Mat eps;      // standard normal draw
    Mat mean, log_std, log_std_raw;
    Vec log_prob;  // per sample (column)
  };
  Sampled sample_policy(const Mat& s, bool deterministic);

  RLConfig cfg_;
  ReplayBuffer buffer_;
  Rng rng_;
  Mlp head_;  // obs -> [mean; log_std]
  Mlp q1_, q2_, q1_target_, q2_target_;
  Adam head_opt_, q1_opt_, q2_opt_;
  double log_alpha_ = 0.0;
  bool alpha_frozen_ = false;
  double alpha_m_ = 0.0, alpha_v_ = 0.0;  // Adam state for log_alpha
  long alpha_t_ = 0;
  long steps_seen_ = 0;
  double last_entropy_ = 0.0;
};

}  // namespace arrl
