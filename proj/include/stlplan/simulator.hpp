#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stlplan/mission.hpp"
#include "stlplan/planner.hpp"
#include "stlplan/trajectory.hpp"

namespace stlplan {

enum class FailureMode { kTotalLoss };
const char* to_string(FailureMode m);
FailureMode failure_mode_from_string(const std::string& s);

struct FailureEvent {
  std::size_t step = 0;
  std::size_t vehicle = 0;
  FailureMode mode = FailureMode::kTotalLoss;
  friend bool operator==(const FailureEvent&, const FailureEvent&) = default;
};

struct ExecutionTrace {
  Trajectory realized;                           // plan; failed vehicles frozen from their failure step on
  std::vector<std::optional<std::size_t>> failed_at;
  std::vector<Installation> completed;           // installations whose full dwell happened
  std::vector<int> capacity;                     // per vehicle, at the end (failed: at failure)
  std::vector<std::string> log;
  std::optional<std::size_t> replan_step;        // first failure step

  /// Installations already complete at step k (runs long enough by then).
  std::vector<Installation> completed_by(const MissionSpec& spec, std::size_t k) const;
  /// Last step each vehicle actually flew (N for survivors).
  std::vector<std::size_t> last_steps() const;
};

/// Replays `plan`. Events must be sorted by step, name distinct vehicles, and
/// satisfy step < N; std::invalid_argument otherwise.
ExecutionTrace simulate(const MissionSpec& spec, const Trajectory& plan, const std::vector<FailureEvent>& events);

struct ReplanResult {
  std::size_t step = 0;
  std::vector<std::size_t> survivors;          // original vehicle indices, in residual order
  std::vector<std::size_t> remaining_targets;  // original target indices, in residual order
  std::vector<std::size_t> completed_targets;
  MissionSpec residual;
  PlanResult plan;                             // over the residual mission
  bool reused_suffix = false;                  // nothing left to do: survivors keep their plan
  Trajectory merged;                           // original vehicle indexing, executed prefix + new plan
};

/// Residual mission at the first failure step and a fresh plan for it.
/// `spec` must be the resolved mission the trace was planned for.
/// Throws std::invalid_argument without survivors, ScheduleOverflow-derived
/// info is reported in plan.overflow.
ReplanResult replan(const ExecutionTrace& trace, const MissionSpec& spec, const PlanOptions& options);

}  // namespace stlplan
