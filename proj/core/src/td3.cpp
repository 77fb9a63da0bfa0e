#include "arrl/td3.hpp"

#include <algorithm>

namespace arrl {
namespace {

std::vector<int> critic_sizes(const RLConfig& cfg) {
  std::vector<int> s{RobotState::kDim + 8};
  s.insert(s.end(), cfg.hidden.begin(), cfg.hidden.end());
  s.push_back(1);
  return s;
}

std::vector<int> actor_sizes(const RLConfig& cfg) {
  std::vector<int> s{RobotState::kDim};
  s.insert(s.end(), cfg.hidden.begin(), cfg.hidden.end());
  s.push_back(8);
  return s;
}

Mat concat_sa(const Mat& s, const Mat& a) {
  Mat x(s.rows() + a.rows(), s.cols());
  x.topRows(s.rows()) = s;
  x.bottomRows(a.rows()) = a;
  return x;
}

}  // namespace

TD3Agent::TD3Agent(const RLConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), buffer_(cfg.buffer_capacity), rng_(seed, 0x7464330000000001ULL) {
  cfg_.validate();
  Rng init(seed, 0x7464330000000002ULL);
  actor_ = Mlp(actor_sizes(cfg_), /*tanh_output=*/true, init);
  q1_ = Mlp(critic_sizes(cfg_), false, init);
  q2_ = Mlp(critic_sizes(cfg_), false, init);
  actor_target_ = actor_;
  q1_target_ = q1_;
  q2_target_ = q2_;
  actor_opt_ = Adam(actor_, cfg_.actor_lr);
  q1_opt_ = Adam(q1_, cfg_.critic_lr);
  q2_opt_ = Adam(q2_, cfg_.critic_lr);
}

Action TD3Agent::select(const RobotState& state, SelectMode mode) {
  Action act;
  if (mode == SelectMode::Explore && steps_seen_ < cfg_.warmup_steps) {
    for (double& a : act.increments) a = rng_.uniform(-1.0, 1.0);
    return act;
  }
  auto sv = state.to_vector();
  Vec x = Eigen::Map<const Vec>(sv.data(), RobotState::kDim);
  Vec a = actor_.forward(x).col(0);
  for (int i = 0; i < 8; ++i) {
    double v = a(i);
    if (mode == SelectMode::Explore)
      v += rng_.normal(0.0, cfg_.exploration_noise_std);
    act.increments[i] = std::clamp(v, -1.0, 1.0);
  }
  return act;
}

void TD3Agent::observe(const Transition& t) {
  buffer_.push(t);
  ++steps_seen_;
}

void TD3Agent::update() {
  if (steps_seen_ < cfg_.warmup_steps) return;
  if (buffer_.size() < static_cast<std::size_t>(cfg_.batch_size)) return;
  Batch b = buffer_.sample(cfg_.batch_size, rng_);
  int n = b.size();

  // Clipped double-Q target with smoothed target action.
  Mat a_next = actor_target_.forward(b.s_next);
  for (int i = 0; i < a_next.size(); ++i) {
    double noise = std::clamp(rng_.normal(0.0, cfg_.target_noise_std),
                              -cfg_.target_noise_clip, cfg_.target_noise_clip);
    a_next(i) = std::clamp(a_next(i) + noise, -1.0, 1.0);
  }
  Mat x_next = concat_sa(b.s_next, a_next);
  Vec bq1 = q1_target_.forward(x_next).row(0).transpose();
  Vec bq2 = q2_target_.forward(x_next).row(0).transpose();
  Vec y = td_target(b.r, b.done, cfg_.gamma, bq1.cwiseMin(bq2));

  Mat x = concat_sa(b.s, b.a);
  double loss = 0.0;
  for (Mlp* q : {&q1_, &q2_}) {
    Adam& opt = (q == &q1_) ? q1_opt_ : q2_opt_;
    Vec pred = q->forward(x).row(0).transpose();
    Vec err = pred - y;
    loss += err.squaredNorm() / n;
    q->zero_grad();
    Mat dy = (2.0 / n) * err.transpose();
    q->backward(dy);
    opt.step(*q);
  }
  last_critic_loss_ = loss;
  ++critic_updates_;

  if (critic_updates_ % cfg_.policy_delay == 0) {
    // Deterministic policy gradient through critic 1.
    Mat a_pi = actor_.forward(b.s);
    Mat x_pi = concat_sa(b.s, a_pi);
    q1_.forward(x_pi);
    q1_.zero_grad();
    Mat dq = Mat::Constant(1, n, -1.0 / n);  // maximize mean Q
    Mat dx = q1_.backward(dq);
    Mat da = dx.bottomRows(8);
    actor_.zero_grad();
    actor_.backward(da);
    actor_opt_.step(actor_);
    q1_.zero_grad();
    ++actor_updates_;

    Mlp::polyak(actor_, actor_target_, cfg_.tau);
    Mlp::polyak(q1_, q1_target_, cfg_.tau);
    Mlp::polyak(q2_, q2_target_, cfg_.tau);
  }
}

std::vector<std::pair<std::string, Mat>> TD3Agent::export_tensors() const {
  std::vector<std::pair<std::string, Mat>> out;
  auto dump = [&](const std::string& prefix, const Mlp& net) {
    const auto& ls = net.layers();
    for (std::size_t i = 0; i < ls.size(); ++i) {
      out.emplace_back(prefix + "." + std::to_string(i) + ".w", ls[i].w);
      out.emplace_back(prefix + "." + std::to_string(i) + ".b", Mat(ls[i].b));
    }
  };
  dump("actor", actor_);
  dump("actor_target", actor_target_);
  dump("q1", q1_);
  dump("q2", q2_);
  dump("q1_target", q1_target_);
  dump("q2_target", q2_target_);
  return out;
}

void TD3Agent::import_tensors(
    const std::vector<std::pair<std::string, Mat>>& tensors) {
  auto fill = [&](const std::string& prefix, Mlp& net) {
    auto& ls = net.layers();
    for (std::size_t i = 0; i < ls.size(); ++i) {
      for (const auto& [name, value] : tensors) {
        if (name == prefix + "." + std::to_string(i) + ".w") ls[i].w = value;
        if (name == prefix + "." + std::to_string(i) + ".b") ls[i].b = value;
      }
    }
  };
  fill("actor", actor_);
  fill("actor_target", actor_target_);
  fill("q1", q1_);
  fill("q2", q2_);
  fill("q1_target", q1_target_);
  fill("q2_target", q2_target_);
}

}  // namespace arrl
