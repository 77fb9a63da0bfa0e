#include "arrl/gait.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arrl {
namespace {

// Rose lift term 4A/dx blows up as dx -> 0; the divisor is floored.
constexpr double kRoseDxFloor = 0.01;

double wrap_phase(double t, double omega) {
  double period = 2.0 * M_PI / omega;
  double tau = std::fmod(t, period);
  if (tau < 0) tau += period;
  return tau;
}

}  // namespace

const char* gait_name(GaitKind k) {
  switch (k) {
    case GaitKind::Line: return "line";
    case GaitKind::Sine: return "sine";
    case GaitKind::Rose: return "rose";
    case GaitKind::Triangle: return "triangle";
  }
  return "?";
}

GaitKind gait_from_name(const std::string& name) {
  if (name == "line") return GaitKind::Line;
  if (name == "sine") return GaitKind::Sine;
  if (name == "rose") return GaitKind::Rose;
  if (name == "triangle") return GaitKind::Triangle;
  throw std::invalid_argument("unknown gait: " + name);
}

TriangleWaypoints GaitSpec::resolve_waypoints(const ResidualParams& p) const {
  if (waypoints) return *waypoints;
  double a = amplitude(p);
  return {x0 + p.delta_x / 2.0, y0 + a, x0 + p.delta_x};
}

void GaitSpec::validate() const {
  geometry.validate();
  auto reachable = [&](double x, double y) {
    double r = std::hypot(x, y);
    return r <= geometry.thigh_len_b + geometry.shank_len_c &&
           r >= std::abs(geometry.thigh_len_b - geometry.shank_len_c);
  };
  if (!reachable(x0, y0))
    throw Unreachable("GaitSpec: neutral foot position unreachable");
  if (waypoints) {
    if (!reachable(waypoints->x1, waypoints->y1))
      throw Unreachable("GaitSpec: triangle waypoint unreachable");
  }
}

GaitSpec make_gait_spec(GaitKind kind, const LegGeometry& geom) {
  GaitSpec spec;
  spec.kind = kind;
  spec.geometry = geom;
  Stance stance = default_stance(geom);
  spec.frame_pitch = stance.torso_pitch;
  spec.x0 = stance.toe_offset.x;
  spec.y0 = stance.toe_offset.y;
  // The paper bounds A/omega at [8, 11] for Triangle and [0, 3] otherwise;
  // per-gait scales map those ranges onto sensible foot lifts.
  spec.amplitude_scale = (kind == GaitKind::Triangle) ? 0.002 : 0.01;
  return spec;
}

FootTarget gait_foot_target(const GaitSpec& spec, const ResidualParams& params,
                            double t) {
  double omega = params.omega;
  double dx = params.delta_x;
  double a = spec.amplitude(params);
  double tau = wrap_phase(t, omega);
  double t_half = M_PI / omega;

  switch (spec.kind) {
    case GaitKind::Line:
      return {spec.x0, spec.y0};

    case GaitKind::Sine: {
      if (tau < t_half)
        return {spec.x0 + omega * tau * dx / M_PI,
                spec.y0 + a * std::sin(omega * tau)};
      // Stance sweep; the printed form uses t and is discontinuous at the
      // half period, so the shifted argument is used instead.
      return {spec.x0 + dx - omega * (tau - t_half) * dx / M_PI, spec.y0};
    }

    case GaitKind::Rose: {
      if (tau < t_half) {
        double alpha_p = omega / 4.0 * (t_half - tau);
        double petal = std::cos(2.0 * alpha_p);
        double y_scale = 4.0 * a / std::max(dx, kRoseDxFloor);
        return {spec.x0 + dx * petal * std::cos(alpha_p),
                spec.y0 + y_scale * petal * std::sin(alpha_p)};
      }
      return {spec.x0 + dx - (tau - t_half) * omega * dx / M_PI, spec.y0};
    }

    case GaitKind::Triangle: {
      TriangleWaypoints wp = spec.resolve_waypoints(params);
      double t_quarter = M_PI / (2.0 * omega);
      if (tau < t_quarter) {
        double s = (std::sin(2.0 * omega * tau - M_PI / 2.0) + 1.0) / 2.0;
        return {spec.x0 + s * (wp.x1 - spec.x0), spec.y0 + s * (wp.y1 - spec.y0)};
      }
      if (tau < t_half) {
        double s = (1.0 - std::sin(2.0 * omega * tau - M_PI / 2.0)) / 2.0;
        return {wp.x1 + s * (wp.x2 - wp.x1), wp.y1 - s * (wp.y1 - spec.y0)};
      }
      return {wp.x2 - (tau - t_half) * omega * (wp.x2 - spec.x0) / M_PI, spec.y0};
    }
  }
  return {spec.x0, spec.y0};
}

LineOffsets line_joint_offsets(const GaitSpec& spec, const ResidualParams& params,
                               double t) {
  double omega = params.omega;
  double tau = wrap_phase(t, omega);
  double pulse = tau < M_PI / omega ? std::sin(omega * tau) : 0.0;
  double a = spec.amplitude(params);  // radians for Line
  return {a * pulse, -a * pulse};
}

JointAngles gait_joint_angles(const GaitSpec& spec, const ResidualParams& params,
                              double t, Leg leg) {
  double t_eff = t + (leg == Leg::Right ? M_PI / params.omega : 0.0);

  JointAngles out;
  if (spec.kind == GaitKind::Line) {
    Vec2 neutral = rotate({spec.x0, spec.y0}, -spec.frame_pitch);
    JointAngles base =
        leg_ik_clamped({neutral.x, neutral.y}, spec.geometry, spec.knee_sign);
    LineOffsets off = line_joint_offsets(spec, params, t_eff);
    out = {base.hip_alpha1 + off.hip, base.knee_alpha2 + off.knee};
  } else {
    FootTarget target = gait_foot_target(spec, params, t_eff);
    Vec2 leg_vec = rotate({target.x, target.y}, -spec.frame_pitch);
    out = leg_ik_clamped({leg_vec.x, leg_vec.y}, spec.geometry, spec.knee_sign);
  }
  // Targets the servos could never hold are clipped the same way the
  // actuators clip them.
  out.hip_alpha1 = std::clamp(out.hip_alpha1, spec.geometry.joint_limit_lo,
                              spec.geometry.joint_limit_hi);
  out.knee_alpha2 = std::clamp(out.knee_alpha2, spec.geometry.joint_limit_lo,
                               spec.geometry.joint_limit_hi);
  return out;
}

}  // namespace arrl
