#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace arrl {

/// The seven tunable base-controller parameters (theta-prime), searched by
/// the black-box optimizers within box bounds. The amplitude is stored as
/// A/omega because that is the quantity with a bounded search range.
struct ResidualParams {
  double a_over_omega = 1.0;  // amplitude units * s (joint-space units for Line)
  double omega = 5.0;         // gait frequency, rad/s
  double kpp = 0.02;          // front hip P gain on pitch error
  double kdp = 0.02;          // front hip D gain
  double kpy = 0.02;          // abduction P gain on yaw error
  double kdy = 0.02;          // abduction D gain
  double delta_x = 0.02;      // stride length, m

  static constexpr std::size_t kDim = 7;

  std::array<double, kDim> to_array() const {
    return {a_over_omega, omega, kpp, kdp, kpy, kdy, delta_x};
  }
  static ResidualParams from_array(const std::array<double, kDim>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }

  double gait_period() const { return 2.0 * M_PI / omega; }
};

}  // namespace arrl
