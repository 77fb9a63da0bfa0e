#include "arrl/bounds.hpp"

#include "arrl/bayesopt.hpp"
#include "arrl/cmaes.hpp"
#include "arrl/tbpsa.hpp"

namespace arrl {

Eigen::VectorXd normalize(const Eigen::VectorXd& x, const OptBounds& b) {
  return (x - b.lo).cwiseQuotient(b.hi - b.lo);
}

Eigen::VectorXd denormalize(const Eigen::VectorXd& u, const OptBounds& b) {
  return b.lo + u.cwiseProduct(b.hi - b.lo);
}

const char* optimizer_name(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::None: return "none";
    case OptimizerKind::CMAES: return "cmaes";
    case OptimizerKind::TBPSA: return "tbpsa";
    case OptimizerKind::BO: return "bo";
  }
  return "?";
}

OptimizerKind optimizer_from_name(const std::string& name) {
  if (name == "none") return OptimizerKind::None;
  if (name == "cmaes") return OptimizerKind::CMAES;
  if (name == "tbpsa") return OptimizerKind::TBPSA;
  if (name == "bo") return OptimizerKind::BO;
  throw std::invalid_argument("unknown optimizer: " + name);
}

std::unique_ptr<Optimizer> make_optimizer(OptimizerKind kind, OptBounds bounds,
                                          std::uint64_t seed) {
  switch (kind) {
    case OptimizerKind::None: return nullptr;
    case OptimizerKind::CMAES: return std::make_unique<CmaEs>(bounds, seed);
    case OptimizerKind::TBPSA: return std::make_unique<Tbpsa>(bounds, seed);
    case OptimizerKind::BO: return std::make_unique<BayesOpt>(bounds, seed);
  }
  return nullptr;
}

}  // namespace arrl
