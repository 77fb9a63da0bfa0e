#include "arrl/selfcheck.hpp"

#include <cmath>
#include <sstream>

#include "arrl/biped_env.hpp"
#include "arrl/gait.hpp"
#include "arrl/transfer.hpp"

namespace arrl {
namespace {

CheckResult fk_ik_roundtrip() {
  LegGeometry geom;
  Rng rng(7, 1);
  double worst = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    double r = rng.uniform(std::abs(geom.thigh_len_b - geom.shank_len_c) + 1e-6,
                           geom.thigh_len_b + geom.shank_len_c - 1e-6);
    double phi = rng.uniform(-M_PI, M_PI);
    FootTarget t{r * std::sin(phi), -r * std::cos(phi)};
    FootTarget back = leg_fk(leg_ik(t, geom), geom);
    worst = std::max({worst, std::abs(back.x - t.x), std::abs(back.y - t.y)});
  }
  std::ostringstream os;
  os << "max error " << worst << " m";
  return {"fk_ik_roundtrip", worst < 1e-9, os.str()};
}

CheckResult eq1_centering() {
  LegGeometry geom;
  auto [lo, hi] = standing_knee_interval(geom);
  double worst = 0.0;
  double l = geom.support_length();
  for (int i = 0; i <= 200; ++i) {
    double knee = lo + (hi - lo) * i / 200.0;
    double hip;
    try {
      hip = standing_hip_angle(knee, geom);
    } catch (const OutOfDomain&) {
      continue;
    }
    // Rebuild the chain and project the torso CoM.
    double g = geom.stick_angle_gamma;
    Vec2 knee_pos{geom.shank_len_c * std::cos(g), geom.shank_len_c * std::sin(g)};
    double beta = g - knee;
    Vec2 hip_pos = knee_pos + geom.thigh_len_b * unit_dir(beta);
    double torso_angle = beta - M_PI / 2.0 - hip;
    Vec2 com = hip_pos +
               geom.com_frac_k * geom.torso_len_a * unit_dir(torso_angle);
    worst = std::max(worst, std::abs(com.x - l / 2.0));
  }
  std::ostringstream os;
  os << "max CoM offset " << worst << " m";
  return {"eq1_com_centering", worst < 1e-6, os.str()};
}

CheckResult gait_continuity() {
  LegGeometry geom;
  ResidualParams p;
  p.a_over_omega = 1.5;
  p.omega = 5.0;
  p.delta_x = 0.03;
  bool ok = true;
  std::ostringstream os;
  for (GaitKind kind : {GaitKind::Line, GaitKind::Sine, GaitKind::Rose,
                        GaitKind::Triangle}) {
    if (kind == GaitKind::Triangle) p.a_over_omega = 9.0;
    GaitSpec spec = make_gait_spec(kind, geom);
    double period = 2.0 * M_PI / p.omega;
    double dt = 1e-3;
    double max_jump = 0.0, closure = 0.0;
    FootTarget prev = gait_foot_target(spec, p, 0.0);
    for (double t = dt; t <= 3 * period; t += dt) {
      FootTarget cur = gait_foot_target(spec, p, t);
      max_jump = std::max({max_jump, std::abs(cur.x - prev.x),
                           std::abs(cur.y - prev.y)});
      prev = cur;
    }
    for (double t = 0.0; t < period; t += period / 37) {
      FootTarget a = gait_foot_target(spec, p, t);
      FootTarget b = gait_foot_target(spec, p, t + period);
      closure = std::max({closure, std::abs(a.x - b.x), std::abs(a.y - b.y)});
    }
    if (max_jump > 2e-3 || closure > 1e-9) {
      ok = false;
      os << gait_name(kind) << " jump " << max_jump << " closure " << closure
         << "; ";
    }
  }
  if (ok) os << "all gaits periodic and continuous";
  return {"gait_periodicity_continuity", ok, os.str()};
}

CheckResult env_determinism() {
  EnvConfig cfg;
  auto rollout = [&](std::uint64_t seed) {
    BipedEnv env(cfg);
    env.reset(seed);
    Rng rng(seed, 99);
    double acc = 0.0;
    for (int i = 0; i < 100 && !env.done(); ++i) {
      Action a;
      for (double& v : a.increments) v = rng.uniform(-1, 1);
      acc += env.step(a).reward;
      acc += env.physics().pitch;
    }
    return acc;
  };
  double a = rollout(3), b = rollout(3);
  bool ok = a == b;
  return {"env_determinism", ok, ok ? "bit-exact replay" : "replay diverged"};
}

CheckResult flight_energy() {
  EnvConfig cfg;
  cfg.servo_enabled = false;
  cfg.ground_damping = 0.0;
  cfg.friction_damping = 0.0;
  BipedEnv env(cfg);
  env.reset(1);
  auto phys = env.physics();
  phys.com.y += 1.0;  // airborne
  phys.vel = {0.4, 2.5};
  phys.pitch_rate = 1.0;
  phys.qd = {};
  env.set_physics(phys);
  double e0 = env.mechanical_energy();
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    env.step(Action::zeros());
    double e = env.mechanical_energy();
    worst = std::max(worst, std::abs(e - e0) / std::abs(e0));
  }
  std::ostringstream os;
  os << "max relative drift " << worst;
  return {"flight_energy_conservation", worst < 1e-6, os.str()};
}

CheckResult schedule_traces() {
  TransferSchedule s;
  s.k1 = 0.1;
  s.k2 = 0.5;
  s.a_set = 0.3;
  ScheduleErrors calm{0.05, 0.1};
  ScheduleErrors rough{0.5, 0.5};
  bool ok = true;
  ok &= schedule_amplitude(1.0, calm, s, 0.0) == 0.1;
  ok &= schedule_amplitude(2.0, rough, s, 0.1) == 0.1;    // frozen
  ok &= schedule_amplitude(100.0, calm, s, 0.1) == 0.3;   // saturated
  ok &= schedule_weight(1.0, calm, s, 0.0) == 0.5;
  ok &= schedule_weight(1.5, rough, s, 0.5) == 0.5;       // frozen
  ok &= schedule_weight(10.0, rough, s, 0.5) == 1.0;      // saturated
  return {"progressive_schedules", ok,
          ok ? "branch behaviour matches hand traces" : "branch mismatch"};
}

}  // namespace

std::vector<CheckResult> run_selfchecks() {
  return {fk_ik_roundtrip(), eq1_centering(),    gait_continuity(),
          env_determinism(), flight_energy(),    schedule_traces()};
}

}  // namespace arrl
