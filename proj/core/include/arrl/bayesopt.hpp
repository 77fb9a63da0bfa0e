#pragma once

#include "arrl/gp.hpp"

namespace arrl {

/// Bayesian optimization: GP surrogate with expected-improvement acquisition
/// maximized by multistart local search over the unit box. Asks one candidate
/// at a time; the first few asks come from a Halton design.
class BayesOpt : public Optimizer {
public:
  struct Settings {
    int n_init = 0;        // 0: dim + 3 quasi-random points (>= dim + 1)
    int refit_every = 5;   // hyperparameter refits, in tells
    int n_random_starts = 256;
    int n_local_steps = 60;
    GPModel::Settings gp;
  };

  BayesOpt(OptBounds bounds, std::uint64_t seed, Settings settings = {});

  std::string name() const override { return "bo"; }
  Eigen::VectorXd recommend() const override;
  std::string save_state() const override;
  void load_state(const std::string& json) override;

  const GPModel& model() const { return gp_; }
  GPModel& model() { return gp_; }
  long tells() const { return tells_; }

protected:
  std::vector<Candidate> do_ask() override;
  void do_tell(const std::vector<double>& fitness) override;

private:
  Eigen::VectorXd halton_point(long index) const;
  Eigen::VectorXd maximize_ei();

  Settings cfg_;
  Rng rng_;
  int dim_;
  GPModel gp_;
  long tells_ = 0;
  long halton_index_ = 0;
  Eigen::VectorXd last_asked_;
};

}  // namespace arrl
