#include "stlplan/mission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace stlplan {

double distance(const Vec3& a, const Vec3& b) {
  double sq = 0.0;
  for (int j = 0; j < 3; ++j) sq += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(sq);
}

bool Box3::valid() const {
  for (int j = 0; j < 3; ++j) {
    if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) || !(lower[j] < upper[j])) return false;
  }
  return true;
}

Vec3 Box3::centroid() const {
  return {0.5 * (lower[0] + upper[0]), 0.5 * (lower[1] + upper[1]), 0.5 * (lower[2] + upper[2])};
}

Vec3 Box3::extent() const { return {upper[0] - lower[0], upper[1] - lower[1], upper[2] - lower[2]}; }

double Box3::margin(const Vec3& p) const {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 3; ++j) m = std::min({m, p[j] - lower[j], upper[j] - p[j]});
  return m;
}

bool Box3::contains(const Box3& other) const {
  for (int j = 0; j < 3; ++j) {
    if (other.lower[j] < lower[j] || other.upper[j] > upper[j]) return false;
  }
  return true;
}

bool Box3::overlaps(const Box3& other) const {
  for (int j = 0; j < 3; ++j) {
    if (other.upper[j] <= lower[j] || upper[j] <= other.lower[j]) return false;
  }
  return true;
}

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error([&] {
        std::string msg = "invalid mission:";
        for (const auto& i : issues) msg += "\n  - " + i;
        return msg;
      }()),
      issues_(std::move(issues)) {}

namespace {

// Infinite bounds are allowed only where `allow_infinite` (impulsive accelerations).
void check_bounds_pair(std::vector<std::string>& out, const std::string& who, const char* what, const Vec3& lo,
                       const Vec3& hi, bool allow_infinite = false) {
  for (int j = 0; j < 3; ++j) {
    const bool finite = std::isfinite(lo[j]) && std::isfinite(hi[j]);
    if (std::isnan(lo[j]) || std::isnan(hi[j]) || (!finite && !allow_infinite) || !(lo[j] < hi[j])) {
      out.push_back(fmt::format("{}: {} bounds on axis {} must satisfy lower < upper", who, what, j + 1));
    } else if (lo[j] > 0.0 || hi[j] < 0.0) {
      out.push_back(fmt::format("{}: {} bounds on axis {} must admit zero", who, what, j + 1));
    }
  }
}

}  // namespace

std::vector<std::string> validate(const MissionSpec& spec) {
  std::vector<std::string> out;
  const bool ws_ok = spec.workspace.valid();
  if (!ws_ok) out.push_back("workspace: lower bound must be below upper bound on every axis");

  auto check_regions = [&](const std::vector<Region>& regions, const char* kind) {
    for (const auto& r : regions) {
      if (!r.box.valid()) {
        out.push_back(fmt::format("{} '{}': lower bound must be below upper bound on every axis", kind, r.name));
      } else if (ws_ok && !spec.workspace.contains(r.box)) {
        out.push_back(fmt::format("{} '{}' lies outside the workspace", kind, r.name));
      }
    }
  };
  check_regions(spec.obstacles, "obstacle");
  check_regions(spec.targets, "target");
  check_regions(spec.stations, "station");
  check_regions(spec.depots, "depot");

  for (std::size_t a = 0; a < spec.targets.size(); ++a) {
    for (const auto& o : spec.obstacles) {
      if (spec.targets[a].box.overlaps(o.box)) {
        out.push_back(fmt::format("target '{}' intersects obstacle '{}'", spec.targets[a].name, o.name));
      }
    }
    for (std::size_t b = a + 1; b < spec.targets.size(); ++b) {
      if (spec.targets[a].box.overlaps(spec.targets[b].box)) {
        out.push_back(fmt::format("targets '{}' and '{}' overlap", spec.targets[a].name, spec.targets[b].name));
      }
    }
  }

  if (spec.vehicles.empty()) out.push_back("fleet: at least one vehicle is required");
  for (std::size_t d = 0; d < spec.vehicles.size(); ++d) {
    const auto& v = spec.vehicles[d];
    const std::string who = v.name.empty() ? fmt::format("vehicle {}", d) : fmt::format("vehicle '{}'", v.name);
    if (v.depot >= spec.depots.size()) out.push_back(fmt::format("{}: depot index {} out of range", who, v.depot));
    if (v.capacity < 1) out.push_back(fmt::format("{}: capacity must be at least 1", who));
    check_bounds_pair(out, who, "velocity", v.velocity_lower, v.velocity_upper);
    check_bounds_pair(out, who, "acceleration", v.accel_lower, v.accel_upper, true);
    if (v.home) {
      if (!v.home->valid()) {
        out.push_back(fmt::format("{}: home region bounds are inverted", who));
      } else if (ws_ok && !spec.workspace.contains(*v.home)) {
        out.push_back(fmt::format("{}: home region lies outside the workspace", who));
      }
    }
    if (v.initial) {
      if (ws_ok && !spec.workspace.contains(v.initial->position)) {
        out.push_back(fmt::format("{}: initial position lies outside the workspace", who));
      }
      if (v.initial->capacity < 0 || v.initial->capacity > v.capacity) {
        out.push_back(fmt::format("{}: initial capacity must lie in [0, capacity]", who));
      }
    }
  }

  const bool has_horizon = spec.horizon > 0.0;
  const bool has_scale = spec.horizon_scale.has_value();
  if (has_horizon == has_scale) {
    out.push_back("horizon: exactly one of a positive horizon or a horizon scale must be given");
  }
  if (has_scale && !(*spec.horizon_scale >= 1.0)) out.push_back("horizon scale must be at least 1");
  if (!(spec.install_time >= 0.0)) out.push_back("install time must be nonnegative");
  if (!(spec.refill_time >= 0.0)) out.push_back("refill time must be nonnegative");
  // Dwell lengths only matter when there is something to install.
  if (has_horizon && !spec.targets.empty()) {
    if (!(spec.install_time < spec.horizon)) out.push_back("install time must be shorter than the horizon");
    if (!spec.stations.empty() && !(spec.refill_time < spec.horizon)) {
      out.push_back("refill time must be shorter than the horizon");
    }
  }
  if (!(spec.separation > 0.0)) out.push_back("separation threshold must be positive");
  if (!(spec.dt > 0.0)) out.push_back("sampling period must be positive");
  if (!(spec.epsilon >= 0.0)) out.push_back("robustness margin epsilon must be nonnegative");
  return out;
}

void require_valid(const MissionSpec& spec) {
  auto issues = validate(spec);
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

Vec3 start_position(const MissionSpec& spec, std::size_t d) {
  const auto& v = spec.vehicles.at(d);
  if (v.initial) return v.initial->position;
  return spec.depots.at(v.depot).box.centroid();
}

Vec3 start_velocity(const MissionSpec& spec, std::size_t d) {
  const auto& v = spec.vehicles.at(d);
  return v.initial ? v.initial->velocity : Vec3{};
}

int start_capacity(const MissionSpec& spec, std::size_t d) {
  const auto& v = spec.vehicles.at(d);
  return v.initial ? v.initial->capacity : v.capacity;
}

// The 1e-9 slack absorbs representation error in values like 0.3 / 0.1.
std::size_t steps_floor(double seconds, double dt) {
  return static_cast<std::size_t>(std::max(0.0, std::floor(seconds / dt + 1e-9)));
}

std::size_t steps_ceil(double seconds, double dt) {
  return static_cast<std::size_t>(std::max(0.0, std::ceil(seconds / dt - 1e-9)));
}

std::size_t horizon_steps(const MissionSpec& spec) { return steps_floor(spec.horizon, spec.dt); }
std::size_t install_steps(const MissionSpec& spec) { return steps_floor(spec.install_time, spec.dt); }
std::size_t refill_steps(const MissionSpec& spec) { return steps_floor(spec.refill_time, spec.dt); }

std::string channel_name(std::size_t vehicle, std::size_t slot) {
  static constexpr const char* kSlots[kChannelsPerVehicle] = {"px", "py", "pz", "vx", "vy", "vz", "c"};
  return fmt::format("v{}.{}", vehicle, kSlots[slot]);
}

std::vector<std::string> fleet_channel_names(std::size_t vehicles) {
  std::vector<std::string> names;
  names.reserve(vehicles * kChannelsPerVehicle);
  for (std::size_t d = 0; d < vehicles; ++d) {
    for (std::size_t s = 0; s < kChannelsPerVehicle; ++s) names.push_back(channel_name(d, s));
  }
  return names;
}

}  // namespace stlplan
