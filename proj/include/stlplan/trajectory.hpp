#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stlplan/mission.hpp"
#include "stlplan/signal.hpp"

namespace stlplan {

/// One vehicle on the shared grid: samples k = 0..N for p, v, c and
/// accelerations a_k (k = 0..N-1) acting on [t_k, t_k+1).
struct VehicleTrajectory {
  std::vector<Vec3> p;
  std::vector<Vec3> v;
  std::vector<Vec3> a;
  std::vector<int> c;
};

struct Trajectory {
  double dt = 0.5;
  std::vector<VehicleTrajectory> vehicles;

  std::size_t steps() const { return vehicles.empty() ? 0 : vehicles.front().a.size(); }
  /// Joint signal with the fleet channel layout, N+1 samples.
  Signal to_signal() const;
};

/// Exact double-integrator rollout of one vehicle; capacity left empty.
VehicleTrajectory rollout(const Vec3& p0, const Vec3& v0, const std::vector<Vec3>& accel, double dt);

/// Region dwell detected in a position sequence.
struct Visit {
  enum class Kind { kTarget, kStation };
  Kind kind;
  std::size_t region;
  std::size_t first;    // first sample inside
  std::size_t last;     // last sample inside (inclusive)
  bool counted = false; // long enough (and, for targets, started with c > 0)
};

/// Capacity channel from dwell detection. `visits` (optional) receives every
/// run inside a target or station, in order of entry.
std::vector<int> derive_capacity(const MissionSpec& spec, std::size_t vehicle, const std::vector<Vec3>& p,
                                 std::vector<Visit>* visits = nullptr);

/// Capacity at step k after applying runs that have already lasted long
/// enough but have not been exited yet.
int effective_capacity(const MissionSpec& spec, std::size_t vehicle, const std::vector<Vec3>& p, std::size_t k);

/// Rollout of every vehicle from its start state plus derived capacity.
Trajectory propagate(const MissionSpec& spec, const std::vector<std::vector<Vec3>>& accel);

/// Re-derive every capacity channel in place.
void refresh_capacity(const MissionSpec& spec, Trajectory& traj);

/// Largest |v_{k+1} - v_k - a_k dt| and |p_{k+1} - p_k - v_k dt - a_k dt^2/2|.
double dynamics_residual(const Trajectory& traj);

/// Every acceleration inside the per-axis box of its vehicle.
bool accelerations_within(const MissionSpec& spec, const Trajectory& traj);

/// Largest violation of the velocity box (0 when inside).
double velocity_violation(const MissionSpec& spec, const Trajectory& traj);

/// Smallest pairwise distance over all steps, +inf for a single vehicle.
double min_pairwise_distance(const Trajectory& traj);

/// Installations per target: (target, vehicle, first, last) for counted runs.
struct Installation {
  std::size_t target;
  std::size_t vehicle;
  std::size_t first;
  std::size_t last;
};
std::vector<Installation> installations(const MissionSpec& spec, const Trajectory& traj);

}  // namespace stlplan
