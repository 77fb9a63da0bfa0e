#include "arrl/gp.hpp"

#include <algorithm>
#include <cmath>

namespace arrl {
namespace {

double norm_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }
double norm_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

}  // namespace

double expected_improvement(double mean, double var, double best) {
  double s = std::sqrt(std::max(var, 0.0));
  double diff = best - mean;
  if (s < 1e-12) return std::max(diff, 0.0);
  double z = diff / s;
  return s * (z * norm_cdf(z) + norm_pdf(z));
}

GPModel::GPModel(int dim, Settings settings) : dim_(dim), cfg_(settings) {
  log_sf2_ = std::log(cfg_.init_signal_var);
  log_sn2_ = std::log(std::max(cfg_.init_noise_var, cfg_.noise_floor));
  log_ell_ = Eigen::VectorXd::Constant(dim_, std::log(cfg_.init_lengthscale));
}

void GPModel::set_hyperparameters(double signal_var, const Eigen::VectorXd& ell,
                                  double noise_var) {
  log_sf2_ = std::log(signal_var);
  log_ell_ = ell.array().log().matrix();
  log_sn2_ = std::log(std::max(noise_var, cfg_.noise_floor));
  fitted_ = false;
}

void GPModel::add(const Eigen::VectorXd& x, double y) {
  xs_.push_back(x);
  ys_.push_back(y);
  if (ys_.size() == 1 || y < best_y_) {
    best_y_ = y;
    best_x_ = x;
  }
  fitted_ = false;
}

double GPModel::kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  double d2 = 0.0;
  for (int k = 0; k < dim_; ++k) {
    double d = (a(k) - b(k)) / std::exp(log_ell_(k));
    d2 += d * d;
  }
  return std::exp(log_sf2_) * std::exp(-0.5 * d2);
}

void GPModel::fit() {
  int n = size();
  if (n == 0) return;
  y_mean_ = 0.0;
  for (double y : ys_) y_mean_ += y;
  y_mean_ /= n;
  double var = 0.0;
  for (double y : ys_) var += (y - y_mean_) * (y - y_mean_);
  y_std_ = n > 1 ? std::sqrt(var / (n - 1)) : 1.0;
  if (y_std_ < 1e-12) y_std_ = 1.0;

  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) k(i, j) = k(j, i) = kernel(xs_[i], xs_[j]);
  double sn2 = std::exp(log_sn2_);

  double jitter = 0.0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Eigen::MatrixXd kn = k + (sn2 + jitter) * Eigen::MatrixXd::Identity(n, n);
    llt_.compute(kn);
    if (llt_.info() == Eigen::Success) {
      Eigen::VectorXd z(n);
      for (int i = 0; i < n; ++i) z(i) = (ys_[i] - y_mean_) / y_std_;
      alpha_ = llt_.solve(z);
      double quad = z.dot(alpha_);
      Eigen::MatrixXd lmat = llt_.matrixL();
      double logdet = 0.0;
      for (int i = 0; i < n; ++i) logdet += std::log(lmat(i, i));
      log_ml_ = -0.5 * quad - logdet - 0.5 * n * std::log(2.0 * M_PI);
      fitted_ = true;
      return;
    }
    // Duplicate or near-duplicate points; escalate the diagonal jitter.
    jitter = jitter == 0.0 ? 1e-10 : jitter * 100.0;
  }
  throw IllConditionedKernel("GPModel: kernel matrix not positive definite");
}

GPModel::Posterior GPModel::predict(const Eigen::VectorXd& x) const {
  Posterior p;
  int n = size();
  if (!fitted_ || n == 0) {
    p.mean = y_mean_;
    p.var = std::exp(log_sf2_) * y_std_ * y_std_;
    return p;
  }
  Eigen::VectorXd kstar(n);
  for (int i = 0; i < n; ++i) kstar(i) = kernel(x, xs_[i]);
  double mean_z = kstar.dot(alpha_);
  Eigen::VectorXd v = llt_.matrixL().solve(kstar);
  double var_z = std::exp(log_sf2_) - v.squaredNorm();
  p.mean = y_mean_ + y_std_ * mean_z;
  p.var = std::max(var_z, -1e-10) * y_std_ * y_std_;
  return p;
}

double GPModel::log_ml_at(const Eigen::VectorXd& log_params,
                          Eigen::VectorXd* grad) const {
  int n = size();
  double sf2 = std::exp(log_params(0));
  double sn2 = std::exp(log_params(1));
  Eigen::VectorXd ell = log_params.tail(dim_).array().exp();

  Eigen::VectorXd z(n);
  double ym = 0.0;
  for (double y : ys_) ym += y;
  ym /= n;
  double var = 0.0;
  for (double y : ys_) var += (y - ym) * (y - ym);
  double ystd = n > 1 ? std::sqrt(var / (n - 1)) : 1.0;
  if (ystd < 1e-12) ystd = 1.0;
  for (int i = 0; i < n; ++i) z(i) = (ys_[i] - ym) / ystd;

  Eigen::MatrixXd kse(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double d2 = 0.0;
      for (int k = 0; k < dim_; ++k) {
        double d = (xs_[i](k) - xs_[j](k)) / ell(k);
        d2 += d * d;
      }
      kse(i, j) = kse(j, i) = sf2 * std::exp(-0.5 * d2);
    }
  }
  Eigen::MatrixXd kn = kse + sn2 * Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(kn);
  if (llt.info() != Eigen::Success) {
    if (grad) grad->setZero();
    return -1e300;
  }
  Eigen::VectorXd a = llt.solve(z);
  Eigen::MatrixXd lmat = llt.matrixL();
  double logdet = 0.0;
  for (int i = 0; i < n; ++i) logdet += std::log(lmat(i, i));
  double lml = -0.5 * z.dot(a) - logdet - 0.5 * n * std::log(2.0 * M_PI);

  if (grad) {
    Eigen::MatrixXd kinv = llt.solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::MatrixXd w = a * a.transpose() - kinv;
    grad->resize(2 + dim_);
    (*grad)(0) = 0.5 * (w.array() * kse.array()).sum();
    (*grad)(1) = 0.5 * sn2 * w.trace();
    for (int k = 0; k < dim_; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double d = (xs_[i](k) - xs_[j](k)) / ell(k);
          acc += w(i, j) * kse(i, j) * d * d;
        }
      }
      (*grad)(2 + k) = 0.5 * acc;
    }
  }
  return lml;
}

void GPModel::optimize_hyperparameters(int iterations) {
  if (size() < 3) {
    fit();
    return;
  }
  Eigen::VectorXd p(2 + dim_);
  p(0) = log_sf2_;
  p(1) = log_sn2_;
  p.tail(dim_) = log_ell_;

  const double lo_sf2 = std::log(1e-4), hi_sf2 = std::log(1e2);
  const double lo_sn2 = std::log(cfg_.noise_floor), hi_sn2 = std::log(1.0);
  const double lo_ell = std::log(1e-2), hi_ell = std::log(10.0);
  auto clamp_params = [&](Eigen::VectorXd& q) {
    q(0) = std::clamp(q(0), lo_sf2, hi_sf2);
    q(1) = cfg_.learn_noise ? std::clamp(q(1), lo_sn2, hi_sn2) : p(1);
    for (int k = 0; k < dim_; ++k)
      q(2 + k) = std::clamp(q(2 + k), lo_ell, hi_ell);
  };

  Eigen::VectorXd grad(2 + dim_);
  double best = log_ml_at(p, &grad);
  double lr = 0.1;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXd trial = p + lr * grad;
    if (!cfg_.learn_noise) trial(1) = p(1);
    clamp_params(trial);
    Eigen::VectorXd trial_grad(2 + dim_);
    double lml = log_ml_at(trial, &trial_grad);
    if (lml > best) {
      p = trial;
      grad = trial_grad;
      best = lml;
      lr = std::min(lr * 1.3, 1.0);
    } else {
      lr *= 0.5;
      if (lr < 1e-4) break;
    }
  }
  log_sf2_ = p(0);
  log_sn2_ = p(1);
  log_ell_ = p.tail(dim_);
  fit();
}

}  // namespace arrl
