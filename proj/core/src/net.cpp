#include "arrl/net.hpp"

#include <cmath>

namespace arrl {

Mlp::Mlp(std::vector<int> sizes, bool tanh_output, Rng& init_rng)
    : sizes_(std::move(sizes)), tanh_output_(tanh_output) {
  layers_.resize(sizes_.size() - 1);
  for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
    int in = sizes_[i], out = sizes_[i + 1];
    double bound = 1.0 / std::sqrt(static_cast<double>(in));
    Layer& l = layers_[i];
    l.w = Mat::NullaryExpr(out, in, [&] { return init_rng.uniform(-bound, bound); });
    l.b = Vec::NullaryExpr(out, [&] { return init_rng.uniform(-bound, bound); });
    l.gw = Mat::Zero(out, in);
    l.gb = Mat::Zero(out, 1);
  }
}

Mat Mlp::forward(const Mat& x) {
  Mat h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Layer& l = layers_[i];
    l.x_cache = h;
    Mat z = (l.w * h).colwise() + l.b;
    bool activated = i + 1 < layers_.size() || tanh_output_;
    l.y_cache = activated ? z.array().tanh().matrix() : z;
    h = l.y_cache;
  }
  return h;
}

Mat Mlp::backward(const Mat& dy) {
  Mat grad = dy;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    Layer& l = layers_[i];
    bool activated = i + 1 < layers_.size() || tanh_output_;
    Mat dz = activated
                 ? (grad.array() * (1.0 - l.y_cache.array().square())).matrix()
                 : grad;
    l.gw.noalias() += dz * l.x_cache.transpose();
    l.gb += dz.rowwise().sum();
    grad.noalias() = l.w.transpose() * dz;
  }
  return grad;
}

void Mlp::zero_grad() {
  for (Layer& l : layers_) {
    l.gw.setZero();
    l.gb.setZero();
  }
}

void Mlp::polyak(const Mlp& src, Mlp& dst, double tau) {
  for (std::size_t i = 0; i < src.layers_.size(); ++i) {
    dst.layers_[i].w = tau * src.layers_[i].w + (1.0 - tau) * dst.layers_[i].w;
    dst.layers_[i].b = tau * src.layers_[i].b + (1.0 - tau) * dst.layers_[i].b;
  }
}

Adam::Adam(Mlp& net, double lr_, double b1, double b2, double eps_)
    : lr(lr_), beta1(b1), beta2(b2), eps(eps_) {
  for (auto& l : net.layers()) {
    m_.push_back(Mat::Zero(l.w.rows(), l.w.cols()));
    v_.push_back(Mat::Zero(l.w.rows(), l.w.cols()));
    m_.push_back(Mat::Zero(l.b.rows(), 1));
    v_.push_back(Mat::Zero(l.b.rows(), 1));
  }
}

void Adam::step(Mlp& net) {
  ++t;
  double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  std::size_t k = 0;
  auto update = [&](auto& p, const auto& g) {
    m_[k] = beta1 * m_[k] + (1.0 - beta1) * g;
    v_[k] = beta2 * v_[k] + (1.0 - beta2) * g.array().square().matrix();
    p.array() -=
        lr * (m_[k] / bc1).array() / ((v_[k] / bc2).array().sqrt() + eps);
    ++k;
  };
  for (auto& l : net.layers()) {
    update(l.w, l.gw);
    update(l.b, l.gb);
  }
}

Vec td_target(const Vec& r, const Vec& done, double gamma, const Vec& bootstrap) {
  return r.array() + gamma * (1.0 - done.array()) * bootstrap.array();
}

double grad_check(Mlp& net, const Vec& input, Rng& rng) {
  // Scalarize with fixed random output weights so every output contributes.
  Vec wout = Vec::NullaryExpr(net.output_dim(), [&] { return rng.uniform(-1, 1); });

  net.zero_grad();
  Mat x = input;
  net.forward(x);
  net.backward(Mat(wout));

  const double h = 1e-5;
  double worst = 0.0;
  auto probe = [&](double& p, double analytic) {
    double keep = p;
    p = keep + h;
    double up = wout.dot(net.forward(x).col(0));
    p = keep - h;
    double dn = wout.dot(net.forward(x).col(0));
    p = keep;
    double fd = (up - dn) / (2.0 * h);
    double err = std::abs(fd - analytic) /
                 std::max({1.0, std::abs(fd), std::abs(analytic)});
    worst = std::max(worst, err);
  };
  for (auto& l : net.layers()) {
    for (int i = 0; i < l.w.rows(); ++i)
      for (int j = 0; j < l.w.cols(); ++j) probe(l.w(i, j), l.gw(i, j));
    for (int i = 0; i < l.b.size(); ++i) probe(l.b(i), l.gb(i, 0));
  }
  return worst;
}

}  // namespace arrl
