#include "arrl/cmaes.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace arrl {

CmaEs::CmaEs(OptBounds bounds, std::uint64_t seed, Settings settings)
    : Optimizer(std::move(bounds)), rng_(seed, 0x636d616573000001ULL) {
  dim_ = bounds_.dim();
  double d = dim_;
  lambda_ = settings.lambda > 0
                ? settings.lambda
                : 4 + static_cast<int>(std::floor(3.0 * std::log(d)));
  mu_ = lambda_ / 2;

  weights_ = Eigen::VectorXd(mu_);
  for (int i = 0; i < mu_; ++i)
    weights_(i) = std::log(mu_ + 0.5) - std::log(i + 1.0);
  weights_ /= weights_.sum();
  mu_eff_ = 1.0 / weights_.squaredNorm();

  c_sigma_ = (mu_eff_ + 2.0) / (d + mu_eff_ + 5.0);
  d_sigma_ = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (d + 1.0)) - 1.0) +
             c_sigma_;
  c_c_ = (4.0 + mu_eff_ / d) / (d + 4.0 + 2.0 * mu_eff_ / d);
  c_1_ = 2.0 / ((d + 1.3) * (d + 1.3) + mu_eff_);
  c_mu_ = std::min(1.0 - c_1_, 2.0 * (mu_eff_ - 2.0 + 1.0 / mu_eff_) /
                                   ((d + 2.0) * (d + 2.0) + mu_eff_));
  chi_n_ = std::sqrt(d) * (1.0 - 1.0 / (4.0 * d) + 1.0 / (21.0 * d * d));

  mean_ = Eigen::VectorXd::NullaryExpr(dim_, [&] { return rng_.uniform(0, 1); });
  sigma_ = settings.sigma0;
  cov_ = Eigen::MatrixXd::Identity(dim_, dim_);
  path_sigma_ = Eigen::VectorXd::Zero(dim_);
  path_c_ = Eigen::VectorXd::Zero(dim_);
  decompose();
}

void CmaEs::decompose() {
  cov_ = 0.5 * (cov_ + cov_.transpose());  // keep symmetric
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov_);
  Eigen::VectorXd evals = eig.eigenvalues();
  double floor = std::max(1e-20, 1e-14 * evals.maxCoeff());
  for (int i = 0; i < dim_; ++i) evals(i) = std::max(evals(i), floor);
  cov_b_ = eig.eigenvectors();
  cov_d_ = evals.cwiseSqrt().asDiagonal();
  cov_ = cov_b_ * cov_d_ * cov_d_ * cov_b_.transpose();
}

double CmaEs::min_eigenvalue() const {
  double m = 1e300;
  for (int i = 0; i < dim_; ++i)
    m = std::min(m, cov_d_(i, i) * cov_d_(i, i));
  return m;
}

std::vector<Candidate> CmaEs::do_ask() {
  asked_.clear();
  std::vector<Candidate> out;
  for (int k = 0; k < lambda_; ++k) {
    Eigen::VectorXd z =
        Eigen::VectorXd::NullaryExpr(dim_, [&] { return rng_.normal(); });
    Eigen::VectorXd x = mean_ + sigma_ * (cov_b_ * (cov_d_ * z));
    x = x.cwiseMax(0.0).cwiseMin(1.0);  // clip into the (normalized) box
    asked_.push_back(x);
    out.push_back({denormalize(x, bounds_), next_id_++});
  }
  return out;
}

void CmaEs::do_tell(const std::vector<double>& fitness) {
  std::vector<int> order(lambda_);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return fitness[a] < fitness[b]; });

  Eigen::VectorXd old_mean = mean_;
  mean_ = Eigen::VectorXd::Zero(dim_);
  for (int i = 0; i < mu_; ++i) mean_ += weights_(i) * asked_[order[i]];

  Eigen::VectorXd y_w = (mean_ - old_mean) / sigma_;

  // C^{-1/2} y = B D^{-1} B^T y
  Eigen::VectorXd c_inv_sqrt_y =
      cov_b_ * cov_d_.diagonal().cwiseInverse().asDiagonal() *
      (cov_b_.transpose() * y_w);
  path_sigma_ = (1.0 - c_sigma_) * path_sigma_ +
                std::sqrt(c_sigma_ * (2.0 - c_sigma_) * mu_eff_) * c_inv_sqrt_y;

  double ps_norm = path_sigma_.norm();
  double h_sigma_test =
      ps_norm / std::sqrt(1.0 - std::pow(1.0 - c_sigma_, 2.0 * (generation_ + 1)));
  bool h_sigma = h_sigma_test < (1.4 + 2.0 / (dim_ + 1.0)) * chi_n_;

  path_c_ = (1.0 - c_c_) * path_c_;
  if (h_sigma)
    path_c_ += std::sqrt(c_c_ * (2.0 - c_c_) * mu_eff_) * y_w;

  Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < mu_; ++i) {
    Eigen::VectorXd y = (asked_[order[i]] - old_mean) / sigma_;
    rank_mu += weights_(i) * y * y.transpose();
  }
  double delta_h = h_sigma ? 0.0 : c_c_ * (2.0 - c_c_);
  cov_ = (1.0 - c_1_ - c_mu_) * cov_ +
         c_1_ * (path_c_ * path_c_.transpose() + delta_h * cov_) +
         c_mu_ * rank_mu;

  sigma_ *= std::exp(c_sigma_ / d_sigma_ * (ps_norm / chi_n_ - 1.0));
  sigma_ = std::min(sigma_, 1e3);

  ++generation_;
  decompose();
}

Eigen::VectorXd CmaEs::recommend() const {
  Eigen::VectorXd m = mean_.cwiseMax(0.0).cwiseMin(1.0);
  return denormalize(m, bounds_);
}

std::string CmaEs::save_state() const {
  nlohmann::json j;
  auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  j["mean"] = vec(mean_);
  j["sigma"] = sigma_;
  j["path_sigma"] = vec(path_sigma_);
  j["path_c"] = vec(path_c_);
  j["generation"] = generation_;
  j["rng"] = rng_.save_state();
  std::vector<std::vector<double>> c(dim_);
  for (int i = 0; i < dim_; ++i) c[i] = vec(cov_.row(i).transpose());
  j["cov"] = c;
  return j.dump();
}

void CmaEs::load_state(const std::string& json) {
  nlohmann::json j = nlohmann::json::parse(json);
  auto vec = [&](const std::string& key) {
    std::vector<double> v = j.at(key).get<std::vector<double>>();
    return Eigen::Map<Eigen::VectorXd>(v.data(), v.size()).eval();
  };
  mean_ = vec("mean");
  sigma_ = j.at("sigma").get<double>();
  path_sigma_ = vec("path_sigma");
  path_c_ = vec("path_c");
  generation_ = j.at("generation").get<long>();
  rng_.load_state(j.at("rng").get<std::string>());
  auto c = j.at("cov").get<std::vector<std::vector<double>>>();
  for (int i = 0; i < dim_; ++i)
    for (int k = 0; k < dim_; ++k) cov_(i, k) = c[i][k];
  decompose();
}

}  // namespace arrl
