#pragma once

#include <deque>

#include "arrl/bounds.hpp"

namespace arrl {

/// Population-size-adaptation evolution strategy: isotropic mutation with a
/// strong rate, recency-weighted recombination of the best fraction, and a
/// small step toward the recombined best. The population grows when
/// successive recombined means disagree (a noise signature) and shrinks when
/// they agree; the recommendation averages recent means. This is an
/// approximation of TBPSA assembled from its published description.
class Tbpsa : public Optimizer {
public:
  struct Settings {
    int lambda0 = 0;            // 0: 4 + floor(3 ln d), at least 8
    int lambda_min = 8;
    int lambda_max = 256;
    double sigma0 = 0.3;        // normalized units
    double sigma_decay_evals = 300.0;
    double step_rate = 0.5;     // fraction of (best - mean) per generation
    double disagreement_threshold = 1.0;  // in units of current sigma
    int history = 40;           // means averaged into the recommendation
  };

  Tbpsa(OptBounds bounds, std::uint64_t seed, Settings settings = {});

  std::string name() const override { return "tbpsa"; }
  Eigen::VectorXd recommend() const override;
  std::string save_state() const override;
  void load_state(const std::string& json) override;

  int lambda() const { return lambda_; }
  long growth_events() const { return growth_events_; }
  double current_sigma() const;

protected:
  std::vector<Candidate> do_ask() override;
  void do_tell(const std::vector<double>& fitness) override;

private:
  Settings cfg_;
  Rng rng_;
  int dim_;
  int lambda_;
  long evals_ = 0;
  long growth_events_ = 0;
  Eigen::VectorXd mean_;
  bool has_prev_best_ = false;
  Eigen::VectorXd prev_best_;
  std::deque<Eigen::VectorXd> mean_history_;
  std::vector<Eigen::VectorXd> asked_;
};

}  // namespace arrl
