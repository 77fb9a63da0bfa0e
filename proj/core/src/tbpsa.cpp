#include "arrl/tbpsa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace arrl {

Tbpsa::Tbpsa(OptBounds bounds, std::uint64_t seed, Settings settings)
    : Optimizer(std::move(bounds)),
      cfg_(settings),
      rng_(seed, 0x7462707361000001ULL) {
  dim_ = bounds_.dim();
  lambda_ = cfg_.lambda0 > 0
                ? cfg_.lambda0
                : std::max(8, 4 + static_cast<int>(3.0 * std::log(dim_)));
  mean_ = Eigen::VectorXd::NullaryExpr(dim_, [&] { return rng_.uniform(0, 1); });
}

double Tbpsa::current_sigma() const {
  return cfg_.sigma0 / std::sqrt(1.0 + evals_ / cfg_.sigma_decay_evals);
}

std::vector<Candidate> Tbpsa::do_ask() {
  asked_.clear();
  double sigma = current_sigma();
  std::vector<Candidate> out;
  for (int k = 0; k < lambda_; ++k) {
    Eigen::VectorXd x = mean_;
    for (int i = 0; i < dim_; ++i) x(i) += sigma * rng_.normal();
    x = x.cwiseMax(0.0).cwiseMin(1.0);
    asked_.push_back(x);
    out.push_back({denormalize(x, bounds_), next_id_++});
  }
  return out;
}

void Tbpsa::do_tell(const std::vector<double>& fitness) {
  int n = static_cast<int>(asked_.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return fitness[a] < fitness[b]; });

  int mu = std::max(2, n / 4);
  Eigen::VectorXd best = Eigen::VectorXd::Zero(dim_);
  double wsum = 0.0;
  for (int i = 0; i < mu; ++i) {
    double w = std::log(mu + 0.5) - std::log(i + 1.0);
    best += w * asked_[order[i]];
    wsum += w;
  }
  best /= wsum;

  double sigma = current_sigma();
  if (has_prev_best_) {
    double disagreement = (best - prev_best_).norm() / std::max(sigma, 1e-12);
    if (disagreement > cfg_.disagreement_threshold) {
      lambda_ = std::min(cfg_.lambda_max, lambda_ + std::max(1, lambda_ / 5));
      ++growth_events_;
    } else {
      lambda_ = std::max(cfg_.lambda_min, lambda_ - 1);
    }
  }
  prev_best_ = best;
  has_prev_best_ = true;

  mean_ += cfg_.step_rate * (best - mean_);
  mean_ = mean_.cwiseMax(0.0).cwiseMin(1.0);
  mean_history_.push_back(mean_);
  while (static_cast<int>(mean_history_.size()) > cfg_.history)
    mean_history_.pop_front();
  evals_ += n;
}

Eigen::VectorXd Tbpsa::recommend() const {
  if (mean_history_.empty()) return denormalize(mean_, bounds_);
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(dim_);
  for (const auto& m : mean_history_) avg += m;
  avg /= static_cast<double>(mean_history_.size());
  return denormalize(avg, bounds_);
}

std::string Tbpsa::save_state() const {
  nlohmann::json j;
  auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  j["mean"] = vec(mean_);
  j["lambda"] = lambda_;
  j["evals"] = evals_;
  j["growth_events"] = growth_events_;
  j["has_prev_best"] = has_prev_best_;
  if (has_prev_best_) j["prev_best"] = vec(prev_best_);
  std::vector<std::vector<double>> hist;
  for (const auto& m : mean_history_) hist.push_back(vec(m));
  j["history"] = hist;
  j["rng"] = rng_.save_state();
  return j.dump();
}

void Tbpsa::load_state(const std::string& json) {
  nlohmann::json j = nlohmann::json::parse(json);
  auto vec = [](const nlohmann::json& a) {
    std::vector<double> v = a.get<std::vector<double>>();
    return Eigen::Map<Eigen::VectorXd>(v.data(), v.size()).eval();
  };
  mean_ = vec(j.at("mean"));
  lambda_ = j.at("lambda").get<int>();
  evals_ = j.at("evals").get<long>();
  growth_events_ = j.at("growth_events").get<long>();
  has_prev_best_ = j.at("has_prev_best").get<bool>();
  if (has_prev_best_) prev_best_ = vec(j.at("prev_best"));
  mean_history_.clear();
  for (const auto& m : j.at("history")) mean_history_.push_back(vec(m));
  rng_.load_state(j.at("rng").get<std::string>());
}

}  // namespace arrl
