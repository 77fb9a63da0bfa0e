#include "arrl/bayesopt.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace arrl {
namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(long index, int base) {
  double result = 0.0, f = 1.0 / base;
  long i = index;
  while (i > 0) {
    result += f * (i % base);
    i /= base;
    f /= base;
  }
  return result;
}

}  // namespace

BayesOpt::BayesOpt(OptBounds bounds, std::uint64_t seed, Settings settings)
    : Optimizer(std::move(bounds)),
      cfg_(settings),
      rng_(seed, 0x626f000000000001ULL),
      dim_(bounds_.dim()),
      gp_(bounds_.dim(), settings.gp) {
  if (cfg_.n_init <= 0) cfg_.n_init = dim_ + 3;
  cfg_.n_init = std::max(cfg_.n_init, dim_ + 1);
}

Eigen::VectorXd BayesOpt::halton_point(long index) const {
  Eigen::VectorXd u(dim_);
  for (int k = 0; k < dim_; ++k)
    u(k) = radical_inverse(index + 1, kPrimes[k % 12]);
  return u;
}

Eigen::VectorXd BayesOpt::maximize_ei() {
  double best_y = gp_.best_observed();
  auto ei_at = [&](const Eigen::VectorXd& u) {
    auto p = gp_.predict(u);
    return expected_improvement(p.mean, p.var, best_y);
  };

  Eigen::VectorXd best_u;
  double best_ei = -1.0;
  auto consider = [&](const Eigen::VectorXd& u) {
    double e = ei_at(u);
    if (e > best_ei) {
      best_ei = e;
      best_u = u;
    }
  };

  for (int i = 0; i < cfg_.n_random_starts; ++i) {
    consider(Eigen::VectorXd::NullaryExpr(dim_, [&] { return rng_.uniform(0, 1); }));
  }
  // Exploit around the incumbent as well.
  for (int i = 0; i < 16; ++i) {
    Eigen::VectorXd u = gp_.best_point();
    for (int k = 0; k < dim_; ++k)
      u(k) = std::clamp(u(k) + rng_.normal(0.0, 0.05), 0.0, 1.0);
    consider(u);
  }

  // Coordinate pattern search around the best start.
  double step = 0.05;
  Eigen::VectorXd cur = best_u;
  double cur_ei = best_ei;
  for (int it = 0; it < cfg_.n_local_steps && step > 1e-4; ++it) {
    bool improved = false;
    for (int k = 0; k < dim_; ++k) {
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd u = cur;
        u(k) = std::clamp(u(k) + sgn * step, 0.0, 1.0);
        double e = ei_at(u);
        if (e > cur_ei) {
          cur = u;
          cur_ei = e;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return cur_ei > best_ei ? cur : best_u;
}

std::vector<Candidate> BayesOpt::do_ask() {
  Eigen::VectorXd u;
  if (gp_.size() < cfg_.n_init) {
    u = halton_point(halton_index_++);
  } else {
    if (tells_ % cfg_.refit_every == 0) gp_.optimize_hyperparameters();
    u = maximize_ei();
  }
  last_asked_ = u;
  return {Candidate{denormalize(u, bounds_), next_id_++}};
}

void BayesOpt::do_tell(const std::vector<double>& fitness) {
  gp_.add(last_asked_, fitness[0]);
  gp_.fit();
  ++tells_;
}

Eigen::VectorXd BayesOpt::recommend() const {
  if (gp_.size() == 0) return denormalize(Eigen::VectorXd::Constant(dim_, 0.5), bounds_);
  return denormalize(gp_.best_point(), bounds_);
}

std::string BayesOpt::save_state() const {
  nlohmann::json j;
  std::vector<std::vector<double>> xs;
  for (const auto& x : gp_.points())
    xs.emplace_back(x.data(), x.data() + x.size());
  j["xs"] = xs;
  j["ys"] = gp_.targets();
  j["tells"] = tells_;
  j["halton_index"] = halton_index_;
  j["signal_var"] = gp_.signal_var();
  j["noise_var"] = gp_.noise_var();
  Eigen::VectorXd ell = gp_.lengthscales();
  j["lengthscales"] = std::vector<double>(ell.data(), ell.data() + ell.size());
  j["rng"] = rng_.save_state();
  return j.dump();
}

void BayesOpt::load_state(const std::string& json) {
  nlohmann::json j = nlohmann::json::parse(json);
  gp_ = GPModel(dim_, cfg_.gp);
  auto xs = j.at("xs").get<std::vector<std::vector<double>>>();
  auto ys = j.at("ys").get<std::vector<double>>();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(xs[i].data(), xs[i].size());
    gp_.add(x, ys[i]);
  }
  auto ellv = j.at("lengthscales").get<std::vector<double>>();
  Eigen::VectorXd ell = Eigen::Map<Eigen::VectorXd>(ellv.data(), ellv.size());
  gp_.set_hyperparameters(j.at("signal_var").get<double>(), ell,
                          j.at("noise_var").get<double>());
  tells_ = j.at("tells").get<long>();
  halton_index_ = j.at("halton_index").get<long>();
  rng_.load_state(j.at("rng").get<std::string>());
  if (gp_.size() > 0) gp_.fit();
}

}  // namespace arrl
