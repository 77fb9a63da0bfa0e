#include "arrl/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace arrl {

void LegGeometry::validate() const {
  if (torso_len_a <= 0 || thigh_len_b <= 0 || shank_len_c <= 0 || arm_len <= 0)
    throw std::invalid_argument("LegGeometry: lengths must be positive");
  if (!(stick_angle_gamma > 0 && stick_angle_gamma < M_PI / 2))
    throw std::invalid_argument("LegGeometry: gamma must be in (0, pi/2)");
  if (!(com_frac_k > 0 && com_frac_k <= 1))
    throw std::invalid_argument("LegGeometry: com_frac_k must be in (0, 1]");
  if (stick_mount < 0 || stick_mount >= shank_len_c)
    throw std::invalid_argument("LegGeometry: stick_mount must be in [0, c)");
}

double LegGeometry::support_length() const {
  return (shank_len_c - stick_mount) / std::cos(stick_angle_gamma);
}

StickFrame stick_frame(const LegGeometry& geom) {
  // Chosen so that the stick tip meets the ground exactly when the shank is
  // at gamma with the toe grounded; the ground span then equals
  // support_length().
  return {geom.stick_mount,
          (geom.shank_len_c - geom.stick_mount) * std::tan(geom.stick_angle_gamma)};
}

FootTarget leg_fk(const JointAngles& angles, const LegGeometry& geom) {
  double a1 = angles.hip_alpha1;
  double a12 = angles.hip_alpha1 + angles.knee_alpha2;
  double b = geom.thigh_len_b, c = geom.shank_len_c;
  return {b * std::sin(a1) + c * std::sin(a12),
          -b * std::cos(a1) - c * std::cos(a12)};
}

JointAngles leg_ik(const FootTarget& target, const LegGeometry& geom,
                   int knee_sign) {
  double b = geom.thigh_len_b, c = geom.shank_len_c;
  double r2 = target.x * target.x + target.y * target.y;
  double r = std::sqrt(r2);
  if (r < 1e-12) throw DegenerateTarget("leg_ik: target at the hip origin");
  double rmax = b + c;
  double rmin = std::abs(b - c);
  if (r > rmax + 1e-12 || r < rmin - 1e-12)
    throw Unreachable("leg_ik: target outside the reachable annulus");

  double cos_knee = (r2 - b * b - c * c) / (2.0 * b * c);
  cos_knee = std::clamp(cos_knee, -1.0, 1.0);
  double knee = (knee_sign < 0 ? -1.0 : 1.0) * std::acos(cos_knee);

  // Angle of the target measured from the straight-down axis.
  double phi = std::atan2(target.x, -target.y);
  double offset = std::atan2(c * std::sin(knee), b + c * std::cos(knee));
  double hip = std::remainder(phi - offset, 2.0 * M_PI);
  return {hip, knee};
}

JointAngles leg_ik_clamped(const FootTarget& target, const LegGeometry& geom,
                           int knee_sign) {
  double b = geom.thigh_len_b, c = geom.shank_len_c;
  double r = std::hypot(target.x, target.y);
  const double margin = 1e-9;
  double rmax = b + c - margin;
  double rmin = std::abs(b - c) + margin;
  FootTarget t = target;
  if (r < 1e-12) {
    t = {0.0, -rmin};  // degenerate input: pick the closest point straight down
  } else if (r > rmax) {
    t = {target.x * (rmax / r), target.y * (rmax / r)};
  } else if (r < rmin) {
    t = {target.x * (rmin / r), target.y * (rmin / r)};
  }
  return leg_ik(t, geom, knee_sign);
}

double standing_hip_angle(double knee_alpha2, const LegGeometry& geom) {
  double g = geom.stick_angle_gamma;
  double l = geom.support_length();
  double arg = (l / 2.0 - geom.thigh_len_b * std::cos(knee_alpha2 - g) -
                geom.shank_len_c * std::cos(g)) /
               (geom.torso_len_a * geom.com_frac_k);
  if (arg < -1.0 || arg > 1.0)
    throw OutOfDomain("standing_hip_angle: knee angle geometrically infeasible");
  return -M_PI / 2.0 - knee_alpha2 + g - std::acos(arg);
}

std::pair<double, double> standing_knee_interval(const LegGeometry& geom) {
  auto feasible = [&](double a2) {
    double g = geom.stick_angle_gamma;
    double arg = (geom.support_length() / 2.0 -
                  geom.thigh_len_b * std::cos(a2 - g) -
                  geom.shank_len_c * std::cos(g)) /
                 (geom.torso_len_a * geom.com_frac_k);
    return arg >= -1.0 && arg <= 1.0;
  };
  double centre = default_stance(geom).hind.knee_alpha2;
  double lo = centre, hi = centre;
  const double step = 1e-4;
  while (lo - step > -M_PI && feasible(lo - step)) lo -= step;
  while (hi + step < M_PI && feasible(hi + step)) hi += step;
  return {lo, hi};
}

Stance default_stance(const LegGeometry& geom) {
  // Pick the knee angle that makes the arccos argument vanish: the torso is
  // then exactly vertical and the reference pitch is pi/2.
  double g = geom.stick_angle_gamma;
  double q = (geom.support_length() / 2.0 -
              geom.shank_len_c * std::cos(g)) /
             geom.thigh_len_b;
  if (q < -1.0 || q > 1.0)
    throw OutOfDomain("default_stance: geometry admits no vertical-torso stance");
  double knee = g - std::acos(q);  // knee-backward branch
  double hip = standing_hip_angle(knee, geom);

  Stance s;
  s.hind = {hip, knee};
  s.torso_pitch = M_PI / 2.0;
  // Hip position relative to the toe, from the standing chain.
  double beta = g - knee;  // world angle of the thigh (knee -> hip)
  Vec2 knee_pos{geom.shank_len_c * std::cos(g), geom.shank_len_c * std::sin(g)};
  Vec2 hip_pos = knee_pos + geom.thigh_len_b * unit_dir(beta);
  s.toe_offset = {-hip_pos.x, -hip_pos.y};
  return s;
}

}  // namespace arrl
