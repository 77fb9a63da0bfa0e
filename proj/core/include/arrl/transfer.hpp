#pragma once

#include <deque>

#include "arrl/trainer.hpp"

namespace arrl {

/// Progressive deployment schedule parameters. Thresholds gate both ramps on
/// the window-averaged |e_pitch| and |de_pitch/dt|.
struct TransferSchedule {
  double k1 = 0.02;              // amplitude ramp rate, m/s
  double k2 = 0.2;               // weight ramp rate, 1/s
  double a_set = 0.0;            // target amplitude, m (0: trained amplitude)
  double e_pitch_threshold = 0.15;       // rad
  double e_pitch_rate_threshold = 0.35;  // rad/s
  int averaging_window = 25;     // control steps

  void validate() const {
    if (k1 <= 0 || k2 <= 0)
      throw std::invalid_argument("TransferSchedule: ramp rates must be positive");
    if (e_pitch_threshold <= 0 || e_pitch_rate_threshold <= 0)
      throw std::invalid_argument("TransferSchedule: thresholds must be positive");
  }
};

struct ScheduleErrors {
  double e_pitch = 0.0;       // window-averaged |e_pitch|
  double e_pitch_rate = 0.0;  // window-averaged |de/dt|

  bool below(const TransferSchedule& s) const {
    return e_pitch < s.e_pitch_threshold &&
           e_pitch_rate < s.e_pitch_rate_threshold;
  }
};

/// Amplitude ramp: k1*t while below threshold and short of a_set, frozen at
/// the previous value on threshold breach, a_set once reached.
double schedule_amplitude(double t, const ScheduleErrors& errs,
                          const TransferSchedule& sched, double prev_a);

/// Base-weight ramp mirroring the amplitude rule, saturating at 1.
double schedule_weight(double t, const ScheduleErrors& errs,
                       const TransferSchedule& sched, double prev_w);

/// Sliding window of |e| and |de/dt| samples.
class ErrorWindow {
public:
  explicit ErrorWindow(int capacity) : capacity_(capacity) {}
  void add(double e_pitch, double e_pitch_rate);
  ScheduleErrors average() const;

private:
  int capacity_;
  std::deque<double> e_, de_;
};

struct TransferResult {
  double ret = 0.0;
  double walk_distance = 0.0;  // forward displacement at termination, m
  int steps = 0;
};

/// One evaluation episode on a (possibly perturbed) environment, with or
/// without the progressive wrapper. The schedule overrides the gait
/// amplitude and scales the base-controller weight; all other theta-prime
/// members keep their trained values.
TransferResult evaluate_transfer(Agent* agent, BaseController* controller,
                                 const EnvConfig& env_cfg,
                                 const TransferSchedule& sched,
                                 bool use_schedule, std::uint64_t seed);

/// Default perturbation profile standing in for the unmodelled real robot.
DynamicsPerturbation default_perturbation();

}  // namespace arrl
