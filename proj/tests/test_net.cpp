#include <cmath>

#include "doctest.h"

#include "arrl/net.hpp"

using namespace arrl;

TEST_CASE("linear net gradients are exact") {
  Rng rng(1, 0);
  Mlp net({4, 3}, false, rng);
  Rng check_rng(2, 0);
  for (int i = 0; i < 10; ++i) {
    Vec x = Vec::NullaryExpr(4, [&] { return check_rng.uniform(-2, 2); });
    CHECK(grad_check(net, x, check_rng) < 1e-10);
  }
}

TEST_CASE("two-hidden-layer tanh net passes the finite-difference check") {
  Rng rng(3, 0);
  Mlp net({6, 16, 16, 4}, true, rng);
  Rng check_rng(4, 0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    Vec x = Vec::NullaryExpr(6, [&] { return check_rng.uniform(-2, 2); });
    worst = std::max(worst, grad_check(net, x, check_rng));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("zero downstream weights kill upstream gradients") {
  Rng rng(5, 0);
  Mlp net({3, 8, 2}, false, rng);
  net.layers()[1].w.setZero();  // output layer ignores the hidden layer
  net.zero_grad();
  Vec x(3);
  x << 0.3, -0.4, 0.8;
  net.forward(x);
  net.backward(Mat::Ones(2, 1));
  CHECK(net.layers()[0].gw.cwiseAbs().maxCoeff() == 0.0);
  CHECK(net.layers()[0].gb.cwiseAbs().maxCoeff() == 0.0);
  CHECK(net.layers()[1].gb.cwiseAbs().maxCoeff() > 0.0);  // bias still learns
}

TEST_CASE("polyak endpoints") {
  Rng rng(6, 0);
  Mlp src({4, 8, 2}, false, rng);
  Mlp dst({4, 8, 2}, false, rng);
  Mlp dst_frozen = dst;
  Mlp::polyak(src, dst_frozen, 0.0);
  for (std::size_t i = 0; i < dst.layers().size(); ++i) {
    CHECK((dst_frozen.layers()[i].w.array() == dst.layers()[i].w.array()).all());
    CHECK((dst_frozen.layers()[i].b.array() == dst.layers()[i].b.array()).all());
  }
  Mlp::polyak(src, dst, 1.0);
  for (std::size_t i = 0; i < dst.layers().size(); ++i) {
    CHECK((dst.layers()[i].w.array() == src.layers()[i].w.array()).all());
    CHECK((dst.layers()[i].b.array() == src.layers()[i].b.array()).all());
  }
}

TEST_CASE("td_target terminal and discount edge cases") {
  Vec r(3), done(3), boot(3);
  r << 1.0, 2.0, -0.5;
  boot << 10.0, 20.0, 30.0;
  done << 1.0, 0.0, 0.0;
  Vec y = td_target(r, done, 0.9, boot);
  CHECK(y(0) == 1.0);  // done cuts the bootstrap
  CHECK(y(1) == doctest::Approx(2.0 + 0.9 * 20.0));
  Vec y0 = td_target(r, done, 0.0, boot);
  CHECK(y0(1) == 2.0);
  CHECK(y0(2) == -0.5);
}

TEST_CASE("clipped double-Q fixed point equals value iteration on a 2-state MDP") {
  // Deterministic 2-state, 2-action MDP. Rewards and transitions below;
  // gamma = 0.9. The oracle is plain value iteration.
  const double gamma = 0.9;
  const double reward[2][2] = {{1.0, 0.0}, {2.0, -1.0}};
  const int next_state[2][2] = {{0, 1}, {0, 1}};

  double q_oracle[2][2] = {};
  for (int it = 0; it < 2000; ++it) {
    double next_q[2][2];
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a) {
        int sn = next_state[s][a];
        next_q[s][a] =
            reward[s][a] + gamma * std::max(q_oracle[sn][0], q_oracle[sn][1]);
      }
    std::copy(&next_q[0][0], &next_q[0][0] + 4, &q_oracle[0][0]);
  }

  // Fitted iteration through min_double_q_target with tables as the critics.
  double q_table[2][2] = {};
  Mat s_next(1, 4);
  Vec r(4), done = Vec::Zero(4);
  int idx = 0;
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 2; ++a) {
      s_next(0, idx) = next_state[s][a];
      r(idx) = reward[s][a];
      ++idx;
    }
  auto q_fn = [&](const Mat& states, const Mat& actions) {
    Vec out(states.cols());
    for (int i = 0; i < states.cols(); ++i) {
      int s = static_cast<int>(states(0, i));
      int a = actions(0, i) > 0.5 ? 1 : 0;
      out(i) = q_table[s][a];
    }
    return out;
  };
  auto greedy = [&](const Mat& states) {
    Mat acts(1, states.cols());
    for (int i = 0; i < states.cols(); ++i) {
      int s = static_cast<int>(states(0, i));
      acts(0, i) = q_table[s][1] > q_table[s][0] ? 1.0 : 0.0;
    }
    return acts;
  };
  for (int it = 0; it < 2000; ++it) {
    Vec y = min_double_q_target(r, done, gamma, s_next, q_fn, q_fn, greedy);
    idx = 0;
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a) q_table[s][a] = y(idx++);
  }

  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 2; ++a)
      CHECK(std::abs(q_table[s][a] - q_oracle[s][a]) < 1e-6);
}

TEST_CASE("adam with zero learning rate leaves parameters unchanged") {
  Rng rng(8, 0);
  Mlp net({4, 8, 2}, false, rng);
  Mlp before = net;
  Adam opt(net, 0.0);
  net.zero_grad();
  net.forward(Mat::Ones(4, 5));
  net.backward(Mat::Ones(2, 5));
  opt.step(net);
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    CHECK((net.layers()[i].w.array() == before.layers()[i].w.array()).all());
    CHECK((net.layers()[i].b.array() == before.layers()[i].b.array()).all());
  }
}
