#include "stlplan/motion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stlplan {

namespace {

// Relative slack when comparing against limits; realised per-axis
// accelerations are clamped back into the box afterwards.
constexpr double kSlack = 1.0 + 1e-12;

}  // namespace

double directional_speed_limit(const VehicleSpec& v, const Vec3& u) {
  double lim = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 3; ++j) {
    if (u[j] > 0.0) lim = std::min(lim, v.velocity_upper[j] / u[j]);
    if (u[j] < 0.0) lim = std::min(lim, -v.velocity_lower[j] / -u[j]);
  }
  return lim;
}

double directional_accel_limit(const VehicleSpec& v, const Vec3& u) {
  // Both the accelerating and the braking phase must fit on each axis.
  double lim = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 3; ++j) {
    const double mag = std::abs(u[j]);
    if (mag == 0.0) continue;
    lim = std::min(lim, std::min(v.accel_upper[j], -v.accel_lower[j]) / mag);
  }
  return lim;
}

double trapezoid_time(double length, double speed_limit, double accel_limit) {
  if (length <= 0.0) return 0.0;
  if (!std::isfinite(accel_limit)) return length / speed_limit;
  if (length >= speed_limit * speed_limit / accel_limit) return length / speed_limit + speed_limit / accel_limit;
  return 2.0 * std::sqrt(length / accel_limit);
}

namespace {

struct DiscreteLeg {
  std::size_t accel_steps = 0;
  std::size_t cruise_steps = 0;
  double accel = 0.0;
};

// Smallest K = 2 na + nc with na >= 1 such that the accel magnitude
// L / (na dt^2 (na + nc)) and the peak speed L / (dt (na + nc)) are within
// limits; among ties the gentlest acceleration wins.
DiscreteLeg discrete_leg(double length, double speed_limit, double accel_limit, double dt) {
  DiscreteLeg out;
  if (length <= 0.0) return out;
  const double v = speed_limit * kSlack;
  const double a = accel_limit * kSlack;
  for (std::size_t k = 2;; ++k) {
    bool found = false;
    for (std::size_t na = 1; 2 * na <= k; ++na) {
      const std::size_t span = k - na;  // na + nc
      const double peak = length / (dt * static_cast<double>(span));
      const double acc = length / (static_cast<double>(na) * dt * dt * static_cast<double>(span));
      if (peak <= v && acc <= a && (!found || acc < out.accel)) {
        out = {na, k - 2 * na, acc};
        found = true;
      }
    }
    if (found) return out;
  }
}

}  // namespace

std::size_t leg_steps(double length, double speed_limit, double accel_limit, double dt) {
  if (length <= 0.0) return 0;
  if (!std::isfinite(accel_limit)) return steps_ceil(length / speed_limit, dt);
  const DiscreteLeg leg = discrete_leg(length, speed_limit, accel_limit, dt);
  return 2 * leg.accel_steps + leg.cruise_steps;
}

LegProfile plan_leg(const Vec3& from, const Vec3& to, const VehicleSpec& v, double dt) {
  LegProfile out;
  const double length = distance(from, to);
  if (length <= 0.0) return out;
  Vec3 u{};
  for (int j = 0; j < 3; ++j) u[j] = (to[j] - from[j]) / length;
  const double a_lim = directional_accel_limit(v, u);
  if (!std::isfinite(a_lim)) throw std::invalid_argument("cannot realise a leg with unbounded acceleration");
  const DiscreteLeg leg = discrete_leg(length, directional_speed_limit(v, u), a_lim, dt);
  out.accel_steps = leg.accel_steps;
  out.cruise_steps = leg.cruise_steps;
  for (int j = 0; j < 3; ++j) out.accel[j] = std::clamp(u[j] * leg.accel, v.accel_lower[j], v.accel_upper[j]);
  return out;
}

std::vector<Vec3> braking_profile(const Vec3& velocity, const VehicleSpec& v, double dt) {
  std::size_t steps = 0;
  for (int j = 0; j < 3; ++j) {
    if (std::abs(velocity[j]) < 1e-12) continue;
    const double decel = velocity[j] > 0.0 ? -v.accel_lower[j] : v.accel_upper[j];
    steps = std::max(steps, steps_ceil(std::abs(velocity[j]) / decel, dt));
  }
  if (steps == 0) return {};
  Vec3 a{};
  for (int j = 0; j < 3; ++j) {
    a[j] = std::clamp(-velocity[j] / (static_cast<double>(steps) * dt), v.accel_lower[j], v.accel_upper[j]);
  }
  return std::vector<Vec3>(steps, a);
}

Vec3 stopping_point(const Vec3& position, const Vec3& velocity, const VehicleSpec& v, double dt) {
  Vec3 p = position;
  Vec3 vel = velocity;
  for (const auto& a : braking_profile(velocity, v, dt)) integrate(p, vel, a, dt);
  return p;
}

}  // namespace stlplan
