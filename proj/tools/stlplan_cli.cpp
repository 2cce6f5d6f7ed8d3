#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "stlplan/io.hpp"

namespace fs = std::filesystem;
using namespace stlplan;

namespace {

constexpr int kCertified = 0;
constexpr int kInputError = 1;
constexpr int kBestEffort = 2;

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<double> beta;
  std::optional<double> epsilon;
  std::optional<double> dt;
  std::optional<std::size_t> starts;
  std::optional<std::size_t> node_limit;
  std::optional<double> time_limit;
  std::string out_dir = ".";
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seed", f.seed, "multi-start RNG seed");
  cmd->add_option("--beta", f.beta, "smooth robustness temperature")->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", f.epsilon, "required robustness margin")->check(CLI::NonNegativeNumber);
  cmd->add_option("--dt", f.dt, "sampling period [s]")->check(CLI::PositiveNumber);
  cmd->add_option("--starts", f.starts, "optimizer starts (warm start excluded)");
  cmd->add_option("--node-limit", f.node_limit, "branch-and-bound node budget")->check(CLI::PositiveNumber);
  cmd->add_option("--time-limit", f.time_limit, "branch-and-bound wall budget [s]")->check(CLI::PositiveNumber);
  cmd->add_option("--out-dir", f.out_dir, "directory for artifacts");
}

struct Loaded {
  MissionSpec spec;
  PlanOptions options;
  std::vector<FailureEvent> events;
};

Loaded load(const std::string& path, const Flags& f) {
  io::MissionFile mf = io::parse_mission(path);
  Loaded out{mf.spec, {}, mf.events};
  mf.optimizer.apply(out.options.optimizer);
  if (f.seed) out.options.optimizer.seed = *f.seed;
  if (f.beta) out.options.optimizer.beta = *f.beta;
  if (f.starts) out.options.optimizer.starts = *f.starts;
  if (f.node_limit) out.options.budget.node_limit = *f.node_limit;
  if (f.time_limit) {
    out.options.budget.time_limit = std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(*f.time_limit * 1000.0)));
  }
  if (f.dt) out.spec.dt = *f.dt;
  if (f.epsilon) out.spec.epsilon = *f.epsilon;
  out.options.optimizer.epsilon = out.spec.epsilon;
  require_valid(out.spec);
  out.options.optimizer.validate();
  return out;
}

std::string out_path(const Flags& f, const std::string& name) { return (fs::path(f.out_dir) / name).string(); }

void print_report(const std::string& title, const RobustnessReport& r) {
  std::cout << fmt::format("{}: rho = {} (eps {}), binding clause '{}'\n", title, io::format_double(r.exact),
                           io::format_double(r.epsilon), r.binding);
  for (const auto& c : r.top_level) std::cout << fmt::format("  {:<28} {}\n", c.label, io::format_double(c.exact));
}

void write_plan(const Flags& f, const PlanResult& pr, const std::string& prefix) {
  io::write_file(out_path(f, prefix + "route.json"), io::route_json(*pr.model, pr.routes, &pr.schedule, pr.warnings));
  io::write_file(out_path(f, prefix + "trajectory.csv"), io::trajectory_csv(pr.trajectory()));
  io::write_file(out_path(f, prefix + "report.json"), io::report_json(pr.report(), pr.overflow, pr.warnings));
  io::write_file(out_path(f, prefix + "plot.dat"), io::plot_data(pr.trajectory(), pr.report()));
}

int verdict(const RobustnessReport& r) {
  if (r.satisfied) return kCertified;
  std::cout << fmt::format("best effort only: binding clause '{}' at {}\n", r.binding, io::format_double(r.exact));
  return kBestEffort;
}

int run_plan(const std::string& mission, const Flags& f) {
  Loaded in = load(mission, f);
  fs::create_directories(f.out_dir);
  PlanResult pr;
  try {
    pr = plan_mission(in.spec, in.options);
  } catch (const RoutingFailure& e) {
    std::cout << e.what() << "\n";
    return kBestEffort;
  }
  for (const auto& w : pr.warnings) std::cerr << "warning: " << w << "\n";
  write_plan(f, pr, "");
  print_report("plan", pr.report());
  return verdict(pr.report());
}

int run_route(const std::string& mission, const Flags& f) {
  Loaded in = load(mission, f);
  fs::create_directories(f.out_dir);
  std::vector<std::string> warnings;
  RoutingModel model = build_model(in.spec, &warnings);
  RouteSolution sol = solve(model, in.options.budget);
  const bool usable = sol.status == SolveStatus::kOptimal || sol.status == SolveStatus::kFeasible;
  std::optional<Schedule> schedule;
  if (usable) schedule = extract_tours(sol, model, in.spec);
  io::write_file(out_path(f, "route.json"), io::route_json(model, sol, schedule ? &*schedule : nullptr, warnings));
  std::cout << fmt::format("routing {}: objective {} m, bound {} m, {} nodes\n", to_string(sol.status),
                           io::format_double(sol.objective), io::format_double(sol.bound), sol.nodes);
  if (!sol.infeasibility_hint.empty()) std::cout << sol.infeasibility_hint << "\n";
  return sol.status == SolveStatus::kOptimal ? kCertified : kBestEffort;
}

int run_monitor(const std::string& mission, const std::string& csv, const Flags& f) {
  Loaded in = load(mission, f);
  Trajectory traj = io::read_trajectory_csv(io::read_file(csv));
  if (std::abs(traj.dt - in.spec.dt) > 1e-12) {
    throw std::invalid_argument(fmt::format("trajectory dt {} differs from mission dt {}", traj.dt, in.spec.dt));
  }
  if (traj.vehicles.size() != in.spec.vehicles.size()) {
    throw std::invalid_argument(fmt::format("trajectory has {} vehicles, mission {}", traj.vehicles.size(), in.spec.vehicles.size()));
  }
  MissionSpec spec = in.spec;
  const bool homeless = std::any_of(spec.vehicles.begin(), spec.vehicles.end(), [](const VehicleSpec& v) { return !v.home; });
  if (homeless) {
    // Homes come from the same routing the planner would use.
    RoutingModel model = build_model(spec);
    RouteSolution sol = solve(model, in.options.budget);
    if (sol.status != SolveStatus::kOptimal && sol.status != SolveStatus::kFeasible) {
      throw RoutingFailure(sol.status, sol.infeasibility_hint);
    }
    spec = assign_homes(spec, extract_tours(sol, model, spec));
  }
  spec.horizon = static_cast<double>(traj.steps()) * spec.dt;
  spec.horizon_scale.reset();
  CompiledMission cm = compile(spec);
  if (cm.steps != traj.steps()) {
    throw std::invalid_argument(fmt::format("trajectory has {} steps, mission horizon {}", traj.steps(), cm.steps));
  }
  RobustnessReport r = certify(cm.formula, traj, in.options.optimizer.beta, spec.epsilon);
  fs::create_directories(f.out_dir);
  io::write_file(out_path(f, "report.json"), io::report_json(r, std::nullopt, {}));
  print_report("monitor", r);
  return verdict(r);
}

int run_replay(const std::string& mission, const std::optional<std::string>& events_path, const Flags& f) {
  Loaded in = load(mission, f);
  std::vector<FailureEvent> events = events_path ? io::parse_events(*events_path) : in.events;
  fs::create_directories(f.out_dir);
  PlanResult pr;
  try {
    pr = plan_mission(in.spec, in.options);
  } catch (const RoutingFailure& e) {
    std::cout << e.what() << "\n";
    return kBestEffort;
  }
  write_plan(f, pr, "");
  ExecutionTrace tr;
  try {
    tr = simulate(pr.spec, pr.trajectory(), events);
  } catch (const std::invalid_argument& e) {
    throw io::FormatError({fmt::format("event script: {}", e.what())});
  }
  if (!tr.replan_step) {
    print_report("plan", pr.report());
    return verdict(pr.report());
  }

  std::ostringstream log;
  for (const auto& l : tr.log) log << l << "\n";
  const auto last = tr.last_steps();
  std::ostringstream trace;
  io::write_trajectory_csv(trace, tr.realized, 0, &last);
  io::write_file(out_path(f, "trace.csv"), trace.str());

  ReplanResult rr;
  try {
    rr = replan(tr, pr.spec, in.options);
  } catch (const RoutingFailure& e) {
    log << fmt::format("step {}: replan failed: {}\n", *tr.replan_step, e.what());
    io::write_file(out_path(f, "events.log"), log.str());
    std::cout << e.what() << "\n";
    return kBestEffort;
  }
  log << fmt::format("step {}: completed", rr.step);
  for (auto q : rr.completed_targets) log << ' ' << pr.spec.targets[q].name;
  log << "\n";
  log << fmt::format("step {}: replanned with survivors", rr.step);
  for (std::size_t i = 0; i < rr.survivors.size(); ++i) log << fmt::format(" {}->{}", rr.survivors[i], i);
  log << "; remaining targets";
  for (auto q : rr.remaining_targets) log << ' ' << pr.spec.targets[q].name;
  log << (rr.reused_suffix ? "; original suffix kept\n" : "\n");
  for (const auto& w : rr.plan.warnings) log << "warning: " << w << "\n";
  log << fmt::format("replan rho = {}, binding '{}'\n", io::format_double(rr.plan.report().exact), rr.plan.report().binding);
  io::write_file(out_path(f, "events.log"), log.str());

  std::ostringstream fresh;
  io::write_trajectory_csv(fresh, rr.plan.trajectory(), rr.step);
  io::write_file(out_path(f, "replan_trajectory.csv"), fresh.str());
  io::write_file(out_path(f, "replan_route.json"),
                 io::route_json(*rr.plan.model, rr.plan.routes, rr.reused_suffix ? nullptr : &rr.plan.schedule, rr.plan.warnings));
  io::write_file(out_path(f, "replan_report.json"), io::report_json(rr.plan.report(), rr.plan.overflow, rr.plan.warnings));
  io::write_file(out_path(f, "merged_trajectory.csv"), io::trajectory_csv(rr.merged));
  print_report("plan", pr.report());
  print_report("replan", rr.plan.report());
  return verdict(rr.plan.report());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-vehicle installation mission planner"};
  app.require_subcommand(1);
  Flags f;
  std::string mission, csv;
  std::optional<std::string> events;

  auto* plan = app.add_subcommand("plan", "route, schedule and optimize a mission");
  plan->add_option("mission", mission, "mission JSON")->required()->check(CLI::ExistingFile);
  add_flags(plan, f);
  auto* replay = app.add_subcommand("replay", "plan, replay failure events and replan");
  replay->add_option("mission", mission, "mission JSON")->required()->check(CLI::ExistingFile);
  replay->add_option("events", events, "event script CSV (defaults to the mission's events)")->check(CLI::ExistingFile);
  add_flags(replay, f);
  auto* monitor = app.add_subcommand("monitor", "certify a trajectory CSV against a mission");
  monitor->add_option("mission", mission, "mission JSON")->required()->check(CLI::ExistingFile);
  monitor->add_option("trajectory", csv, "trajectory CSV")->required()->check(CLI::ExistingFile);
  add_flags(monitor, f);
  auto* route = app.add_subcommand("route", "solve the routing MILP only");
  route->add_option("mission", mission, "mission JSON")->required()->check(CLI::ExistingFile);
  add_flags(route, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (*plan) return run_plan(mission, f);
    if (*replay) return run_replay(mission, events, f);
    if (*monitor) return run_monitor(mission, csv, f);
    return run_route(mission, f);
  } catch (const io::FormatError& e) {
    std::cerr << e.what() << "\n";
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kInputError;
}
