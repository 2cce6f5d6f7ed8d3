#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stlplan/mission.hpp"
#include "stlplan/routing.hpp"
#include "stlplan/trajectory.hpp"

namespace stlplan {

struct Stop {
  enum class Kind { kStart, kTarget, kStation, kHome };
  Kind kind = Kind::kStart;
  std::size_t region = 0;  // target / station index; depot index for kStart; unused for kHome
  Vec3 position{};         // where the vehicle is at rest
  std::size_t arrival = 0; // first step at rest at `position`
  std::size_t dwell = 0;   // steps held before the next leg starts
  int capacity = 0;        // magazine after leaving this stop
};

const char* to_string(Stop::Kind kind);

struct VehicleSchedule {
  std::vector<Vec3> braking;  // applied from step 0 when starting in motion
  std::vector<Stop> stops;    // stops.front() is the start
  Box3 home;                  // region the vehicle ends in
  double route_distance = 0.0;  // legs that realise routed edges, centroid to centroid
  double extra_distance = 0.0;  // detours, repositioning and parking offsets
  std::size_t required_steps = 0;
};

struct Schedule {
  std::vector<VehicleSchedule> vehicles;
  std::size_t required_steps = 0;  // smallest N the schedule fits in
  double route_distance = 0.0;
  double extra_distance = 0.0;
};

/// The schedule does not fit in the mission horizon.
class ScheduleOverflow : public std::runtime_error {
 public:
  ScheduleOverflow(std::size_t required_steps, double minimal_horizon);
  std::size_t required_steps() const { return required_steps_; }
  double minimal_horizon() const { return minimal_horizon_; }

 private:
  std::size_t required_steps_;
  double minimal_horizon_;
};

/// Steps for a rest-to-rest leg of vehicle `v` (impulsive limit when the
/// acceleration bound along the leg is infinite).
std::size_t leg_duration(const Vec3& from, const Vec3& to, const VehicleSpec& v, double dt);

/// Times the routes: legs at the fastest discrete trapezoid, T_ins holds at
/// targets, T_rs holds at trip-start stations whenever the magazine cannot
/// cover the next trip, then a final leg into the home region. Vehicles that
/// share a home region park at distinct slots along its longest axis.
Schedule extract_tours(const RouteSolution& sol, const RoutingModel& model, const MissionSpec& spec);

/// Throws ScheduleOverflow when the schedule needs more steps than the horizon.
void require_fits(const Schedule& schedule, const MissionSpec& spec);

/// Fixes T_N = ceil(scale * required) * dt when the spec asks for a scaled
/// horizon; a spec with an explicit horizon is returned unchanged.
MissionSpec resolve_horizon(MissionSpec spec, const Schedule& schedule);

/// Fills missing home regions from the schedule.
MissionSpec assign_homes(MissionSpec spec, const Schedule& schedule);

/// Accelerations realising the schedule, zero-padded or truncated to the
/// horizon. Throws std::invalid_argument for unbounded accelerations.
Trajectory warm_start(const Schedule& schedule, const MissionSpec& spec);

}  // namespace stlplan
