#pragma once

#include <Eigen/Dense>
#include <vector>

#include "arrl/bounds.hpp"

namespace arrl {

/// Gaussian process regression with a squared-exponential ARD kernel on the
/// unit box. Targets are standardized internally; hyperparameters (signal
/// variance, per-dimension lengthscales, noise variance) are refit by
/// gradient ascent on the log marginal likelihood.
class GPModel {
public:
  struct Settings {
    double init_lengthscale = 0.3;
    double init_signal_var = 1.0;
    double init_noise_var = 1e-4;
    bool learn_noise = true;
    double noise_floor = 1e-8;
  };

  explicit GPModel(int dim, Settings settings = {});

  void add(const Eigen::VectorXd& x, double y);
  int size() const { return static_cast<int>(ys_.size()); }
  int dim() const { return dim_; }

  /// Rebuild the kernel factorization. Throws IllConditionedKernel if the
  /// matrix stays indefinite after jitter escalation.
  void fit();
  /// Marginal-likelihood ascent over the log hyperparameters, then fit().
  void optimize_hyperparameters(int iterations = 40);

  struct Posterior {
    double mean = 0.0;
    double var = 0.0;  // latent-function variance, >= 0 up to small slack
  };
  Posterior predict(const Eigen::VectorXd& x) const;

  double log_marginal_likelihood() const { return log_ml_; }
  double best_observed() const { return best_y_; }
  const Eigen::VectorXd& best_point() const { return best_x_; }
  const std::vector<Eigen::VectorXd>& points() const { return xs_; }
  const std::vector<double>& targets() const { return ys_; }

  Eigen::VectorXd lengthscales() const {
    return log_ell_.array().exp().matrix();
  }
  double signal_var() const { return std::exp(log_sf2_); }
  double noise_var() const { return std::exp(log_sn2_); }
  void set_hyperparameters(double signal_var, const Eigen::VectorXd& ell,
                           double noise_var);

private:
  double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  double log_ml_at(const Eigen::VectorXd& log_params,
                   Eigen::VectorXd* grad) const;

  int dim_;
  Settings cfg_;
  std::vector<Eigen::VectorXd> xs_;
  std::vector<double> ys_;
  double y_mean_ = 0.0, y_std_ = 1.0;
  double best_y_ = 0.0;
  Eigen::VectorXd best_x_;

  double log_sf2_, log_sn2_;
  Eigen::VectorXd log_ell_;

  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;  // K^-1 (y - mean)
  double log_ml_ = 0.0;
  bool fitted_ = false;
};

/// Expected improvement (minimization) at posterior (mean, var) against the
/// incumbent best.
double expected_improvement(double mean, double var, double best);

}  // namespace arrl
