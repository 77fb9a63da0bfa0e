#include <cmath>

#include "doctest.h"

#include "arrl/sac.hpp"
#include "arrl/td3.hpp"

using namespace arrl;

namespace {

RLConfig small_cfg() {
  RLConfig cfg;
  cfg.hidden = {32, 32};
  cfg.batch_size = 32;
  cfg.buffer_capacity = 10'000;
  cfg.warmup_steps = 0;
  return cfg;
}

RobotState random_state(Rng& rng) {
  RobotState s;
  s.pitch = rng.uniform(-1, 1);
  s.ang_vel[1] = rng.uniform(-1, 1);
  for (double& q : s.joint_angles) q = rng.uniform(-1, 1);
  return s;
}

Transition random_transition(Rng& rng) {
  Transition t;
  t.s = random_state(rng).to_vector();
  t.s_next = random_state(rng).to_vector();
  for (double& a : t.a) a = rng.uniform(-1, 1);
  t.r = rng.uniform(-1, 1);
  t.done = rng.uniform(0, 1) < 0.1;
  return t;
}

std::size_t actor_hash(TD3Agent& agent) {
  std::size_t h = 0;
  for (const auto& l : agent.actor().layers())
    for (int i = 0; i < l.w.size(); ++i)
      h ^= std::hash<double>{}(l.w.data()[i]) + 0x9e3779b9 + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

TEST_CASE("replay buffer FIFO eviction and capacity") {
  ReplayBuffer buf(10);
  Rng rng(1, 0);
  for (int i = 0; i < 15; ++i) {
    Transition t = random_transition(rng);
    t.r = i;
    buf.push(t);
  }
  CHECK(buf.size() == 10);
  CHECK(buf.at(0).r == 5.0);  // oldest five were evicted
  CHECK(buf.at(9).r == 14.0);
}

TEST_CASE("td3 zero learning rate is a null step") {
  RLConfig cfg = small_cfg();
  cfg.actor_lr = cfg.critic_lr = 0.0;
  TD3Agent agent(cfg, 7);
  Rng rng(2, 0);
  for (int i = 0; i < 100; ++i) agent.observe(random_transition(rng));
  auto before = agent.export_tensors();
  for (int i = 0; i < 5; ++i) agent.update();
  auto after = agent.export_tensors();
  REQUIRE(before.size() == after.size());
  for (std::size_t i = 0; i < before.size(); ++i)
    CHECK((before[i].second.array() == after[i].second.array()).all());
}

TEST_CASE("td3 critic loss trends down on a frozen batch distribution") {
  RLConfig cfg = small_cfg();
  TD3Agent agent(cfg, 11);
  Rng rng(3, 0);
  for (int i = 0; i < 500; ++i) agent.observe(random_transition(rng));
  agent.update();
  double first = agent.last_critic_loss();
  double last = first;
  for (int i = 0; i < 100; ++i) {
    agent.update();
    last = agent.last_critic_loss();
  }
  CHECK(last < first);
}

TEST_CASE("td3 delayed policy updates") {
  RLConfig cfg = small_cfg();
  cfg.policy_delay = 2;
  TD3Agent agent(cfg, 13);
  Rng rng(4, 0);
  for (int i = 0; i < 200; ++i) agent.observe(random_transition(rng));
  for (int i = 1; i <= 10; ++i) {
    std::size_t before = actor_hash(agent);
    agent.update();
    std::size_t after = actor_hash(agent);
    if (i % 2 == 0) {
      CHECK(before != after);
    } else {
      CHECK(before == after);
    }
  }
  CHECK(agent.actor_updates() == 5);
}

TEST_CASE("select is deterministic in exploit mode and bounded always") {
  RLConfig cfg = small_cfg();
  TD3Agent td3(cfg, 17);
  SACAgent sac(cfg, 17);
  Rng rng(5, 0);
  RobotState s = random_state(rng);
  Action a1 = td3.select(s, SelectMode::Exploit);
  Action a2 = td3.select(s, SelectMode::Exploit);
  CHECK(a1.increments == a2.increments);
  Action b1 = sac.select(s, SelectMode::Exploit);
  Action b2 = sac.select(s, SelectMode::Exploit);
  CHECK(b1.increments == b2.increments);
  for (int i = 0; i < 200; ++i) {
    for (double v : td3.select(random_state(rng), SelectMode::Explore).increments) {
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
    }
    for (double v : sac.select(random_state(rng), SelectMode::Explore).increments) {
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("td3 exploration noise has the configured scale") {
  RLConfig cfg = small_cfg();
  cfg.exploration_noise_std = 0.1;
  TD3Agent agent(cfg, 19);
  Rng rng(6, 0);
  RobotState s = random_state(rng);
  Action mean = agent.select(s, SelectMode::Exploit);
  double acc = 0.0;
  long n = 0;
  for (int i = 0; i < 10'000; ++i) {
    Action a = agent.select(s, SelectMode::Explore);
    for (int j = 0; j < 8; ++j) {
      // Skip samples squashed by the clamp.
      if (std::abs(a.increments[j]) < 0.999) {
        double d = a.increments[j] - mean.increments[j];
        acc += d * d;
        ++n;
      }
    }
  }
  double var = acc / n;
  CHECK(var == doctest::Approx(0.01).epsilon(0.1));
}

TEST_CASE("squashed gaussian log-prob integrates to one") {
  for (auto [mu, log_std] : {std::pair{0.3, -0.5}, {-0.6, -1.2}, {0.0, 0.0}}) {
    // Trapezoid over a dense action grid.
    const int n = 200'000;
    double mass = 0.0;
    double lo = -1.0 + 1e-9, hi = 1.0 - 1e-9;
    double h = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) {
      double a = lo + h * i;
      double p = std::exp(SACAgent::squashed_log_prob(mu, log_std, a));
      mass += (i == 0 || i == n) ? 0.5 * p : p;
    }
    mass *= h;
    CHECK(std::abs(mass - 1.0) < 1e-4);
  }
}

TEST_CASE("sac with zero temperature reduces to the deterministic target") {
  RLConfig cfg = small_cfg();
  SACAgent agent(cfg, 23);
  agent.set_temperature(1e-300, true);
  Rng rng(7, 0);
  Batch b;
  int n = 8;
  b.s.resize(14, n);
  b.a.resize(8, n);
  b.s_next.resize(14, n);
  b.r.resize(n);
  b.done = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 14; ++j) {
      b.s(j, i) = rng.uniform(-1, 1);
      b.s_next(j, i) = rng.uniform(-1, 1);
    }
    for (int j = 0; j < 8; ++j) b.a(j, i) = rng.uniform(-1, 1);
    b.r(i) = rng.uniform(-1, 1);
  }
  Vec y = agent.target_for_test(b, true);

  // Oracle: forward the exported tensors through a reimplemented MLP.
  auto tensors = agent.export_tensors();
  auto fetch = [&](const std::string& name) -> const Mat& {
    for (auto& [k, v] : tensors)
      if (k == name) return v;
    throw std::runtime_error("missing " + name);
  };
  auto mlp = [&](const std::string& prefix, Mat x, int layers) {
    for (int l = 0; l < layers; ++l) {
      const Mat& w = fetch(prefix + "." + std::to_string(l) + ".w");
      const Mat& bias = fetch(prefix + "." + std::to_string(l) + ".b");
      x = (w * x).colwise() + Vec(bias);
      if (l + 1 < layers) x = x.array().tanh();
    }
    return x;
  };
  Mat head = mlp("head", b.s_next, 3);
  Mat a_next = head.topRows(8).array().tanh();
  Mat x_next(22, n);
  x_next.topRows(14) = b.s_next;
  x_next.bottomRows(8) = a_next;
  Mat q1 = mlp("q1_target", x_next, 3);
  Mat q2 = mlp("q2_target", x_next, 3);
  for (int i = 0; i < n; ++i) {
    double expect = b.r(i) + cfg.gamma * std::min(q1(0, i), q2(0, i));
    CHECK(std::abs(y(i) - expect) < 1e-8);
  }
}

TEST_CASE("sac entropy rises under a high fixed temperature") {
  RLConfig cfg = small_cfg();
  Rng rng(8, 0);
  auto run = [&](double alpha) {
    SACAgent agent(cfg, 29);
    agent.set_temperature(alpha, true);
    Rng local(9, 0);
    for (int i = 0; i < 300; ++i) agent.observe(random_transition(local));
    for (int i = 0; i < 300; ++i) agent.update();
    return agent.last_entropy_estimate();
  };
  double low = run(1e-4);
  double high = run(5.0);
  CHECK(high > low);
}

TEST_CASE("checkpoint round trip preserves behaviour") {
  RLConfig cfg = small_cfg();
  TD3Agent a(cfg, 31);
  Rng rng(10, 0);
  for (int i = 0; i < 100; ++i) a.observe(random_transition(rng));
  for (int i = 0; i < 20; ++i) a.update();

  TD3Agent b(cfg, 999);
  b.import_tensors(a.export_tensors());
  RobotState s = random_state(rng);
  CHECK(a.select(s, SelectMode::Exploit).increments ==
        b.select(s, SelectMode::Exploit).increments);
}
