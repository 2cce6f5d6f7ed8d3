#pragma once

#include <string>

#include "stlplan/mission.hpp"

namespace fixture {

inline std::string data_path(const std::string& name) { return std::string(STLPLAN_DATA_DIR) + "/" + name; }

inline stlplan::VehicleSpec vehicle(std::size_t depot, int capacity, double vmax = 2.0, double amax = 1.0) {
  stlplan::VehicleSpec v;
  v.name = "v" + std::to_string(depot);
  v.depot = depot;
  v.capacity = capacity;
  v.velocity_lower = {-vmax, -vmax, -vmax};
  v.velocity_upper = {vmax, vmax, vmax};
  v.accel_lower = {-amax, -amax, -amax};
  v.accel_upper = {amax, amax, amax};
  return v;
}

inline stlplan::Box3 cube(double x, double y, double z, double half = 0.5) {
  return {{x - half, y - half, z - half}, {x + half, y + half, z + half}};
}

// One vehicle at (1,1,1), one target at (5,1,1), one station at (9,1,1).
inline stlplan::MissionSpec corridor() {
  stlplan::MissionSpec s;
  s.workspace = {{0, 0, 0}, {12, 4, 4}};
  s.depots = {{"d0", cube(1, 1, 1)}};
  s.targets = {{"t0", cube(5, 1, 1)}};
  s.stations = {{"s0", cube(9, 1, 1)}};
  s.vehicles = {vehicle(0, 1)};
  s.horizon = 20.0;
  s.install_time = 1.0;
  s.refill_time = 1.0;
  s.separation = 1.0;
  s.dt = 0.5;
  s.epsilon = 0.1;
  return s;
}

}  // namespace fixture
