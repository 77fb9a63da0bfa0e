#pragma once

#include <Eigen/Core>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "arrl/rng.hpp"

namespace arrl {

class OptimizerError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class TellBeforeAsk : public OptimizerError {
public:
  using OptimizerError::OptimizerError;
};
class FitnessCountMismatch : public OptimizerError {
public:
  using OptimizerError::OptimizerError;
};
class IllConditionedKernel : public OptimizerError {
public:
  using OptimizerError::OptimizerError;
};

/// Per-dimension box bounds for the search space.
struct OptBounds {
  Eigen::VectorXd lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  void validate() const {
    if (lo.size() != hi.size() || lo.size() == 0)
      throw std::invalid_argument("OptBounds: mismatched or empty bounds");
    for (int i = 0; i < dim(); ++i)
      if (!(lo(i) < hi(i)))
        throw std::invalid_argument("OptBounds: lo must be < hi in every dimension");
  }
  Eigen::VectorXd clip(Eigen::VectorXd x) const {
    return x.cwiseMax(lo).cwiseMin(hi);
  }
};

/// Affine map onto the unit box and back; all optimizers search normalized.
Eigen::VectorXd normalize(const Eigen::VectorXd& x, const OptBounds& b);
Eigen::VectorXd denormalize(const Eigen::VectorXd& u, const OptBounds& b);

struct Candidate {
  Eigen::VectorXd theta;  // in original units, inside bounds
  long id = 0;
};

/// Ask/tell optimizer protocol, minimization. Fitness for every asked
/// candidate must be told before the next ask.
class Optimizer {
public:
  virtual ~Optimizer() = default;

  std::vector<Candidate> ask() {
    if (pending_ > 0)
      throw OptimizerError(name() + ": ask before completing the previous tell");
    auto c = do_ask();
    pending_ = c.size();
    return c;
  }
  void tell(const std::vector<double>& fitness) {
    if (pending_ == 0) throw TellBeforeAsk(name() + ": tell before ask");
    if (fitness.size() != pending_)
      throw FitnessCountMismatch(name() + ": expected " +
                                 std::to_string(pending_) + " fitness values");
    pending_ = 0;
    do_tell(fitness);
  }

  virtual std::string name() const = 0;
  virtual Eigen::VectorXd recommend() const = 0;  // current best estimate
  virtual std::string save_state() const = 0;     // JSON snapshot
  virtual void load_state(const std::string& json) = 0;

  const OptBounds& bounds() const { return bounds_; }
  std::size_t pending() const { return pending_; }

protected:
  explicit Optimizer(OptBounds b) : bounds_(std::move(b)) { bounds_.validate(); }
  virtual std::vector<Candidate> do_ask() = 0;
  virtual void do_tell(const std::vector<double>& fitness) = 0;

  OptBounds bounds_;
  long next_id_ = 0;
  std::size_t pending_ = 0;
};

enum class OptimizerKind { None, CMAES, TBPSA, BO };
const char* optimizer_name(OptimizerKind k);
OptimizerKind optimizer_from_name(const std::string& name);

std::unique_ptr<Optimizer> make_optimizer(OptimizerKind kind, OptBounds bounds,
                                          std::uint64_t seed);

}  // namespace arrl
