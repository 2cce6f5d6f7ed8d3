#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stlplan/mission.hpp"
#include "stlplan/stl.hpp"
#include "stlplan/trajectory.hpp"

namespace stlplan {

struct OptimizerParams {
  double beta = 10.0;
  double epsilon = 0.1;
  std::size_t max_iterations = 150;
  double initial_step = 0.1;       // first trial step, as a fraction of the smallest acceleration bound
  double step_growth = 1.5;        // after an accepted step
  double step_shrink = 0.5;        // per backtrack
  std::size_t max_backtracks = 10;
  double velocity_penalty = 100.0; // weight on squared velocity-bound violation
  double energy_weight = 0.0;      // optional -lambda * sum a^2
  std::size_t starts = 4;
  std::uint64_t seed = 0;
  std::size_t threads = 0;         // 0: PLANNER_THREADS or hardware concurrency

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct TopLevelClause {
  std::string label;
  double exact = 0.0;
};

struct RobustnessReport {
  double exact = 0.0;
  double smooth = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
  bool satisfied = false;           // exact >= epsilon
  std::string binding;              // top-level conjunct with the smallest robustness
  std::vector<TopLevelClause> top_level;
  std::vector<ClauseValue> clauses; // every labelled node
};

/// Exact and smooth robustness with the per-clause breakdown. Throws
/// HorizonError when the trajectory is shorter than the formula horizon.
RobustnessReport certify(const Formula& formula, const Trajectory& traj, double beta, double epsilon);

struct StartSummary {
  std::size_t index = 0;
  double initial_exact = 0.0;
  double best_exact = 0.0;
  double final_smooth = 0.0;
  std::size_t iterations = 0;
};

struct OptimizeResult {
  Trajectory trajectory;
  RobustnessReport report;
  std::vector<StartSummary> starts;
  std::size_t best_start = 0;
};

/// Objective value and its gradient with respect to every acceleration.
struct ObjectiveEval {
  double value = 0.0;
  double smooth = 0.0;
  std::vector<std::vector<Vec3>> gradient;  // [vehicle][step]
};

/// rho_smooth - penalty * sum(velocity violation^2) - energy * sum(a^2) for
/// the rollout of `accel`; the capacity channel is held as derived.
ObjectiveEval objective(const Formula& formula, const MissionSpec& spec, const std::vector<std::vector<Vec3>>& accel,
                        const OptimizerParams& params, bool with_gradient);

/// Multi-start projected-gradient ascent on the accelerations. The returned
/// trajectory is the best exact-robustness iterate that respects the velocity
/// bounds; the warm start is always a candidate.
OptimizeResult optimize(const Formula& formula, const MissionSpec& spec, const Trajectory& warm,
                        const OptimizerParams& params);

/// Worker count: `requested` (or the hardware count when 0) capped by the
/// PLANNER_THREADS environment variable.
std::size_t worker_count(std::size_t requested);

}  // namespace stlplan
