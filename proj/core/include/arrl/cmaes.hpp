#pragma once

#include <Eigen/Dense>

#include "arrl/bounds.hpp"

namespace arrl {

/// Covariance Matrix Adaptation Evolution Strategy with the standard weight
/// and learning-rate schedule, both evolution paths and the rank-1 plus
/// rank-mu covariance update. Operates on the unit-box-normalized domain;
/// asked candidates are clipped into bounds before evaluation.
class CmaEs : public Optimizer {
public:
  struct Settings {
    int lambda = 0;        // 0: 4 + floor(3 ln d)
    double sigma0 = 0.3;   // initial step size, normalized units
  };

  CmaEs(OptBounds bounds, std::uint64_t seed, Settings settings = {});

  std::string name() const override { return "cmaes"; }
  Eigen::VectorXd recommend() const override;
  std::string save_state() const override;
  void load_state(const std::string& json) override;

  int lambda() const { return lambda_; }
  double sigma() const { return sigma_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  long generation() const { return generation_; }
  double min_eigenvalue() const;

protected:
  std::vector<Candidate> do_ask() override;
  void do_tell(const std::vector<double>& fitness) override;

private:
  void decompose();

  Rng rng_;
  int dim_;
  int lambda_, mu_;
  Eigen::VectorXd weights_;
  double mu_eff_;
  double c_sigma_, d_sigma_, c_c_, c_1_, c_mu_, chi_n_;

  Eigen::VectorXd mean_;
  double sigma_;
  Eigen::MatrixXd cov_, cov_b_, cov_d_;  // C = B D^2 B^T
  Eigen::VectorXd path_sigma_, path_c_;
  long generation_ = 0;

  std::vector<Eigen::VectorXd> asked_;  // normalized, clipped
};

}  // namespace arrl
