#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlplan/compiler.hpp"
#include "stlplan/mission.hpp"
#include "stlplan/optimizer.hpp"
#include "stlplan/routing.hpp"
#include "stlplan/schedule.hpp"
#include "stlplan/trajectory.hpp"

namespace stlplan {

struct PlanOptions {
  SolveBudget budget;
  OptimizerParams optimizer;  // epsilon is taken from the mission
};

/// Routing produced no usable solution.
class RoutingFailure : public std::runtime_error {
 public:
  RoutingFailure(SolveStatus status, const std::string& hint);
  SolveStatus status() const { return status_; }

 private:
  SolveStatus status_;
};

struct Overflow {
  std::size_t required_steps = 0;
  double minimal_horizon = 0.0;
};

struct PlanResult {
  MissionSpec spec;  // horizon resolved, homes assigned
  std::vector<std::string> warnings;
  std::optional<RoutingModel> model;
  RouteSolution routes;
  Schedule schedule;
  std::optional<Overflow> overflow;  // schedule did not fit; warm start truncated
  CompiledMission mission;
  Trajectory warm;
  OptimizeResult optimized;

  const Trajectory& trajectory() const { return optimized.trajectory; }
  const RobustnessReport& report() const { return optimized.report; }
  bool certified() const { return optimized.report.satisfied; }
};

/// build_model -> solve -> extract_tours -> warm_start -> optimize -> certify.
/// Throws ValidationError for invalid missions and RoutingFailure when the
/// MILP yields no incumbent.
PlanResult plan_mission(const MissionSpec& spec, const PlanOptions& options);

}  // namespace stlplan
