#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "arrl/biped_env.hpp"
#include "arrl/rng.hpp"

namespace arrl {

struct Transition {
  std::array<double, RobotState::kDim> s{};
  std::array<double, 8> a{};
  double r = 0.0;
  std::array<double, RobotState::kDim> s_next{};
  bool done = false;
};

struct Batch {
  Eigen::MatrixXd s, a, s_next;  // one sample per column
  Eigen::VectorXd r, done;
  int size() const { return static_cast<int>(r.size()); }
};

/// Fixed-capacity FIFO ring with uniform sampling.
class ReplayBuffer {
public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    storage_.reserve(capacity);
  }

  void push(const Transition& t) {
    if (storage_.size() < capacity_) {
      storage_.push_back(t);
    } else {
      storage_[head_] = t;
      head_ = (head_ + 1) % capacity_;
    }
  }

  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const {  // 0 = oldest
    return storage_[(head_ + i) % storage_.size()];
  }

  Batch sample(int batch_size, Rng& rng) const {
    Batch b;
    b.s.resize(RobotState::kDim, batch_size);
    b.a.resize(8, batch_size);
    b.s_next.resize(RobotState::kDim, batch_size);
    b.r.resize(batch_size);
    b.done.resize(batch_size);
    for (int i = 0; i < batch_size; ++i) {
      const Transition& t = storage_[rng.integer(storage_.size())];
      for (int j = 0; j < RobotState::kDim; ++j) {
        b.s(j, i) = t.s[j];
        b.s_next(j, i) = t.s_next[j];
      }
      for (int j = 0; j < 8; ++j) b.a(j, i) = t.a[j];
      b.r(i) = t.r;
      b.done(i) = t.done ? 1.0 : 0.0;
    }
    return b;
  }

private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<Transition> storage_;
};

}  // namespace arrl
