#pragma once

#include <cstddef>
#include <vector>

#include "stlplan/mission.hpp"

namespace stlplan {

/// Rest-to-rest straight-line leg made of three piecewise-constant
/// acceleration phases: `accel_steps` at +accel, `cruise_steps` at zero,
/// `accel_steps` at -accel.
struct LegProfile {
  Vec3 accel{};
  std::size_t accel_steps = 0;
  std::size_t cruise_steps = 0;
  std::size_t total_steps() const { return 2 * accel_steps + cruise_steps; }
};

/// Speed and acceleration limits along unit direction `u` implied by the
/// per-axis bounds of `v`.
double directional_speed_limit(const VehicleSpec& v, const Vec3& u);
double directional_accel_limit(const VehicleSpec& v, const Vec3& u);

/// Continuous-time minimum duration of a rest-to-rest trapezoid of length L.
double trapezoid_time(double length, double speed_limit, double accel_limit);

/// Fewest sampling steps for a rest-to-rest leg of length L on the dt grid.
/// An infinite acceleration limit is treated as the impulsive limit
/// ceil(L / (V dt)); such a leg can be scheduled but not realised by plan_leg.
std::size_t leg_steps(double length, double speed_limit, double accel_limit, double dt);

/// Minimal-step discrete profile from `from` to `to` honouring the bounds.
/// Throws std::invalid_argument for unbounded acceleration.
LegProfile plan_leg(const Vec3& from, const Vec3& to, const VehicleSpec& v, double dt);

/// Constant per-axis deceleration bringing `velocity` to rest in the fewest
/// whole steps permitted by the acceleration bounds. Empty when at rest.
std::vector<Vec3> braking_profile(const Vec3& velocity, const VehicleSpec& v, double dt);

/// Exact double-integrator step.
inline void integrate(Vec3& p, Vec3& vel, const Vec3& a, double dt) {
  for (int j = 0; j < 3; ++j) {
    p[j] = p[j] + vel[j] * dt + 0.5 * a[j] * dt * dt;
    vel[j] = vel[j] + a[j] * dt;
  }
}

/// Where the vehicle comes to rest after braking_profile.
Vec3 stopping_point(const Vec3& position, const Vec3& velocity, const VehicleSpec& v, double dt);

}  // namespace stlplan
