#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "arrl/rng.hpp"

namespace arrl {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Small fixed-topology MLP with built-in reverse-mode differentiation.
/// Hidden layers use tanh (smooth, so finite-difference checks are clean);
/// the output is linear or tanh. Batches are column-major: one sample per
/// column.
class Mlp {
public:
  Mlp() = default;
  Mlp(std::vector<int> sizes, bool tanh_output, Rng& init_rng);

  /// Forward pass; caches activations for the following backward pass.
  Mat forward(const Mat& x);
  /// Propagates dL/dy back through the cached forward pass, accumulating
  /// parameter gradients; returns dL/dx.
  Mat backward(const Mat& dy);

  void zero_grad();
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }
  bool tanh_output() const { return tanh_output_; }

  struct Layer {
    Mat w, gw;
    Vec b, gb;
    Mat x_cache;   // layer input
    Mat y_cache;   // post-activation output
  };
  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }

  static void polyak(const Mlp& src, Mlp& dst, double tau);

private:
  std::vector<int> sizes_;
  bool tanh_output_ = false;
  std::vector<Layer> layers_;
};

/// Adam over the parameters of one Mlp.
class Adam {
public:
  Adam() = default;
  Adam(Mlp& net, double lr, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8);
  void step(Mlp& net);

  double lr = 3e-4;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  long t = 0;
  std::vector<Mat> m_, v_;
};

/// Maximum relative error between reverse-mode gradients and central finite
/// differences (h = 1e-5) of a scalarized output, over all parameters.
double grad_check(Mlp& net, const Vec& input, Rng& rng);

/// y = r + gamma * (1 - done) * bootstrap, elementwise.
Vec td_target(const Vec& r, const Vec& done, double gamma, const Vec& bootstrap);

/// Clipped double-Q bootstrap: y_i = r_i + gamma (1-d_i) min(q1, q2)(s', a')
/// with a' supplied by `next_action`. Generic over the function approximators
/// so tabular oracles can stand in for the networks.
template <class Q1, class Q2, class PolicyFn>
Vec min_double_q_target(const Vec& r, const Vec& done, double gamma,
                        const Mat& s_next, Q1&& q1, Q2&& q2,
                        PolicyFn&& next_action) {
  Mat a_next = next_action(s_next);
  Vec b1 = q1(s_next, a_next);
  Vec b2 = q2(s_next, a_next);
  return td_target(r, done, gamma, b1.cwiseMin(b2));
}

}  // namespace arrl
