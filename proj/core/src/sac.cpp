#include "arrl/sac.hpp"

#include <algorithm>
#include <cmath>

namespace arrl {
namespace {

constexpr double kLogStdMin = -20.0;
constexpr double kLogStdMax = 2.0;
constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * log(2 pi)

std::vector<int> critic_sizes(const RLConfig& cfg) {
  std::vector<int> s{RobotState::kDim + 8};
  s.insert(s.end(), cfg.hidden.begin(), cfg.hidden.end());
  s.push_back(1);
  return s;
}

std::vector<int> head_sizes(const RLConfig& cfg) {
  std::vector<int> s{RobotState::kDim};
  s.insert(s.end(), cfg.hidden.begin(), cfg.hidden.end());
  s.push_back(16);  // 8 means, 8 log-stds
  return s;
}

Mat concat_sa(const Mat& s, const Mat& a) {
  Mat x(s.rows() + a.rows(), s.cols());
  x.topRows(s.rows()) = s;
  x.bottomRows(a.rows()) = a;
  return x;
}

// log(1 - tanh(u)^2) without catastrophic cancellation.
double log_one_minus_tanh2(double u) {
  return 2.0 * (std::log(2.0) - u - std::log1p(std::exp(-2.0 * u)));
}

}  // namespace

SACAgent::SACAgent(const RLConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), buffer_(cfg.buffer_capacity), rng_(seed, 0x7361630000000001ULL) {
  cfg_.validate();
  Rng init(seed, 0x7361630000000002ULL);
  head_ = Mlp(head_sizes(cfg_), false, init);
  q1_ = Mlp(critic_sizes(cfg_), false, init);
  q2_ = Mlp(critic_sizes(cfg_), false, init);
  q1_target_ = q1_;
  q2_target_ = q2_;
  head_opt_ = Adam(head_, cfg_.actor_lr);
  q1_opt_ = Adam(q1_, cfg_.critic_lr);
  q2_opt_ = Adam(q2_, cfg_.critic_lr);
  log_alpha_ = std::log(cfg_.init_temperature);
}

double SACAgent::squashed_log_prob(double mean, double log_std, double action) {
  double a = std::clamp(action, -1.0 + 1e-12, 1.0 - 1e-12);
  double u = std::atanh(a);
  double std = std::exp(log_std);
  double z = (u - mean) / std;
  return -0.5 * z * z - log_std - kHalfLog2Pi - log_one_minus_tanh2(u);
}

SACAgent::Sampled SACAgent::sample_policy(const Mat& s, bool deterministic) {
  Sampled out;
  Mat h = head_.forward(s);
  int n = static_cast<int>(s.cols());
  out.mean = h.topRows(8);
  out.log_std_raw = h.bottomRows(8);
  out.log_std = out.log_std_raw.array().min(kLogStdMax).max(kLogStdMin);
  out.eps = deterministic
                ? Mat::Zero(8, n)
                : Mat::NullaryExpr(8, n, [&] { return rng_.normal(); });
  Mat std = out.log_std.array().exp();
  out.u = out.mean + (std.array() * out.eps.array()).matrix();
  out.a = out.u.array().tanh();
  out.log_prob = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    double lp = 0.0;
    for (int j = 0; j < 8; ++j) {
      lp += -0.5 * out.eps(j, i) * out.eps(j, i) - out.log_std(j, i) -
            kHalfLog2Pi - log_one_minus_tanh2(out.u(j, i));
    }
    out.log_prob(i) = lp;
  }
  return out;
}

Action SACAgent::select(const RobotState& state, SelectMode mode) {
  Action act;
  if (mode == SelectMode::Explore && steps_seen_ < cfg_.warmup_steps) {
    for (double& a : act.increments) a = rng_.uniform(-1.0, 1.0);
    return act;
  }
  auto sv = state.to_vector();
  Mat s = Eigen::Map<const Vec>(sv.data(), RobotState::kDim);
  Sampled smp = sample_policy(s, mode == SelectMode::Exploit);
  for (int i = 0; i < 8; ++i)
    act.increments[i] = std::clamp(smp.a(i, 0), -1.0, 1.0);
  return act;
}

void SACAgent::observe(const Transition& t) {
  buffer_.push(t);
  ++steps_seen_;
}

void SACAgent::update() {
  if (steps_seen_ < cfg_.warmup_steps) return;
  if (buffer_.size() < static_cast<std::size_t>(cfg_.batch_size)) return;
  Batch b = buffer_.sample(cfg_.batch_size, rng_);
  int n = b.size();
  double alpha = std::exp(log_alpha_);

  // Entropy-augmented clipped double-Q target.
  Sampled next = sample_policy(b.s_next, false);
  Mat x_next = concat_sa(b.s_next, next.a);
  Vec bq1 = q1_target_.forward(x_next).row(0).transpose();
  Vec bq2 = q2_target_.forward(x_next).row(0).transpose();
  Vec soft = bq1.cwiseMin(bq2) - alpha * next.log_prob;
  Vec y = td_target(b.r, b.done, cfg_.gamma, soft);

  Mat x = concat_sa(b.s, b.a);
  for (Mlp* q : {&q1_, &q2_}) {
    Adam& opt = (q == &q1_) ? q1_opt_ : q2_opt_;
    Vec pred = q->forward(x).row(0).transpose();
    Vec err = pred - y;
    q->zero_grad();
    q->backward(Mat((2.0 / n) * err.transpose()));
    opt.step(*q);
  }

  // Actor: minimize E[alpha log pi - min Q], reparameterized.
  Sampled cur = sample_policy(b.s, false);
  Mat x_pi = concat_sa(b.s, cur.a);
  Vec v1 = q1_.forward(x_pi).row(0).transpose();
  Vec v2 = q2_.forward(x_pi).row(0).transpose();

  // dQmin/da via whichever critic is active per sample.
  Mat da = Mat::Zero(8, n);
  for (Mlp* q : {&q1_, &q2_}) {
    Mat mask = Mat::Zero(1, n);
    for (int i = 0; i < n; ++i) {
      bool active = (q == &q1_) ? v1(i) <= v2(i) : v2(i) < v1(i);
      if (active) mask(0, i) = 1.0 / n;
    }
    q->forward(x_pi);
    q->zero_grad();
    Mat dx = q->backward(mask);
    da += dx.bottomRows(8);
    q->zero_grad();
  }

  Mat d_mean(8, n), d_logstd(8, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 8; ++j) {
      double u = cur.u(j, i);
      double a = cur.a(j, i);
      double sig_eps = std::exp(cur.log_std(j, i)) * cur.eps(j, i);
      double dq = da(j, i);  // already includes the 1/n factor
      double dlp_dmean = 2.0 * std::tanh(u);
      double dlp_dlogstd = -1.0 + dlp_dmean * sig_eps;
      double dsquash = 1.0 - a * a;
      d_mean(j, i) = (alpha / n) * dlp_dmean - dq * dsquash;
      double g = (alpha / n) * dlp_dlogstd - dq * dsquash * sig_eps;
      // The clamp on log_std passes no gradient when saturated.
      double raw = cur.log_std_raw(j, i);
      if (raw < kLogStdMin || raw > kLogStdMax) g = 0.0;
      d_logstd(j, i) = g;
    }
  }
  Mat d_head(16, n);
  d_head.topRows(8) = d_mean;
  d_head.bottomRows(8) = d_logstd;
  head_.zero_grad();
  head_.backward(d_head);
  head_opt_.step(head_);

  last_entropy_ = -cur.log_prob.mean();

  // Temperature: J(alpha) = -alpha * mean(log pi + target entropy).
  if (!alpha_frozen_) {
    double g = -(cur.log_prob.mean() + cfg_.entropy_target) * alpha;
    ++alpha_t_;
    alpha_m_ = 0.9 * alpha_m_ + 0.1 * g;
    alpha_v_ = 0.999 * alpha_v_ + 0.001 * g * g;
    double mhat = alpha_m_ / (1.0 - std::pow(0.9, alpha_t_));
    double vhat = alpha_v_ / (1.0 - std::pow(0.999, alpha_t_));
    log_alpha_ -= cfg_.alpha_lr * mhat / (std::sqrt(vhat) + 1e-8);
  }

  Mlp::polyak(q1_, q1_target_, cfg_.tau);
  Mlp::polyak(q2_, q2_target_, cfg_.tau);
}

std::vector<std::pair<std::string, Mat>> SACAgent::export_tensors() const {
  std::vector<std::pair<std::string, Mat>> out;
  auto dump = [&](const std::string& prefix, const Mlp& net) {
    const auto& ls = net.layers();
    for (std::size_t i = 0; i < ls.size(); ++i) {
      out.emplace_back(prefix + "." + std::to_string(i) + ".w", ls[i].w);
      out.emplace_back(prefix + "." + std::to_string(i) + ".b", Mat(ls[i].b));
    }
  };
  dump("head", head_);
  dump("q1", q1_);
  dump("q2", q2_);
  dump("q1_target", q1_target_);
  dump("q2_target", q2_target_);
  out.emplace_back("log_alpha", Mat::Constant(1, 1, log_alpha_));
  return out;
}

void SACAgent::import_tensors(
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
  fill("head", head_);
  fill("q1", q1_);
  fill("q2", q2_);
  fill("q1_target", q1_target_);
  fill("q2_target", q2_target_);
  for (const auto& [name, value] : tensors)
    if (name == "log_alpha") log_alpha_ = value(0, 0);
}

}  // namespace arrl
