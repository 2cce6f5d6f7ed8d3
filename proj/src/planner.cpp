#include "stlplan/planner.hpp"

#include <fmt/format.h>

namespace stlplan {

RoutingFailure::RoutingFailure(SolveStatus status, const std::string& hint)
    : std::runtime_error(fmt::format("routing {}{}{}", to_string(status), hint.empty() ? "" : ": ", hint)),
      status_(status) {}

PlanResult plan_mission(const MissionSpec& input, const PlanOptions& options) {
  require_valid(input);
  PlanResult out;
  out.model = build_model(input, &out.warnings);
  out.routes = solve(*out.model, options.budget);
  if (out.routes.status != SolveStatus::kOptimal && out.routes.status != SolveStatus::kFeasible) {
    throw RoutingFailure(out.routes.status, out.routes.infeasibility_hint);
  }
  if (out.routes.status == SolveStatus::kFeasible) {
    out.warnings.push_back(fmt::format("routing budget exhausted; incumbent gap {:.3g}", out.routes.gap));
  }

  out.schedule = extract_tours(out.routes, *out.model, input);
  out.spec = assign_homes(resolve_horizon(input, out.schedule), out.schedule);
  require_valid(out.spec);
  try {
    require_fits(out.schedule, out.spec);
  } catch (const ScheduleOverflow& e) {
    out.overflow = Overflow{e.required_steps(), e.minimal_horizon()};
    out.warnings.push_back(e.what());
  }

  out.mission = compile(out.spec);
  out.warm = warm_start(out.schedule, out.spec);
  OptimizerParams params = options.optimizer;
  params.epsilon = out.spec.epsilon;
  out.optimized = optimize(out.mission.formula, out.spec, out.warm, params);
  return out;
}

}  // namespace stlplan
