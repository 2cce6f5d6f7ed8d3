#include <optional>
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stlplan/io.hpp"

namespace py = pybind11;
using namespace stlplan;

namespace {

struct Knobs {
  std::optional<std::uint64_t> seed;
  std::optional<double> beta;
  std::optional<std::size_t> starts;
  std::optional<std::size_t> node_limit;
  std::optional<double> time_limit;
};

struct Loaded {
  MissionSpec spec;
  PlanOptions options;
  std::vector<FailureEvent> events;
};

Loaded load(const std::string& text, const Knobs& k) {
  io::MissionFile mf = io::parse_mission_text(text);
  Loaded out{mf.spec, {}, mf.events};
  mf.optimizer.apply(out.options.optimizer);
  if (k.seed) out.options.optimizer.seed = *k.seed;
  if (k.beta) out.options.optimizer.beta = *k.beta;
  if (k.starts) out.options.optimizer.starts = *k.starts;
  if (k.node_limit) out.options.budget.node_limit = *k.node_limit;
  if (k.time_limit) out.options.budget.time_limit = std::chrono::milliseconds(static_cast<std::int64_t>(*k.time_limit * 1000.0));
  out.options.optimizer.epsilon = out.spec.epsilon;
  out.options.optimizer.validate();
  return out;
}

py::dict plan_outputs(const PlanResult& pr) {
  py::dict d;
  d["certified"] = pr.certified();
  d["route"] = io::route_json(*pr.model, pr.routes, &pr.schedule, pr.warnings);
  d["report"] = io::report_json(pr.report(), pr.overflow, pr.warnings);
  d["trajectory"] = io::trajectory_csv(pr.trajectory());
  d["plot"] = io::plot_data(pr.trajectory(), pr.report());
  return d;
}

Knobs knobs(std::optional<std::uint64_t> seed, std::optional<double> beta, std::optional<std::size_t> starts,
            std::optional<std::size_t> node_limit, std::optional<double> time_limit) {
  return {seed, beta, starts, node_limit, time_limit};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "mission planning core";

  py::register_exception<io::FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<RoutingFailure>(m, "RoutingFailure", PyExc_RuntimeError);

  m.def("softmin", [](std::vector<double> v, double beta) { return softmin(v, beta); }, py::arg("values"), py::arg("beta"));
  m.def("softmax", [](std::vector<double> v, double beta) { return softmax(v, beta); }, py::arg("values"), py::arg("beta"));

  m.def("parse_mission", [](const std::string& text) { return io::serialize_mission(io::parse_mission_text(text).spec); },
        py::arg("text"), "Validate a mission document and return its canonical form.");

  m.def(
      "route",
      [](const std::string& text, std::optional<std::size_t> node_limit, std::optional<double> time_limit) {
        Loaded in = load(text, knobs({}, {}, {}, node_limit, time_limit));
        py::gil_scoped_release unlocked;
        std::vector<std::string> warnings;
        RoutingModel model = build_model(in.spec, &warnings);
        RouteSolution sol = solve(model, in.options.budget);
        std::optional<Schedule> schedule;
        if (sol.status == SolveStatus::kOptimal || sol.status == SolveStatus::kFeasible) {
          schedule = extract_tours(sol, model, in.spec);
        }
        return io::route_json(model, sol, schedule ? &*schedule : nullptr, warnings);
      },
      py::arg("text"), py::arg("node_limit") = py::none(), py::arg("time_limit") = py::none());

  m.def(
      "plan",
      [](const std::string& text, std::optional<std::uint64_t> seed, std::optional<double> beta,
         std::optional<std::size_t> starts, std::optional<std::size_t> node_limit, std::optional<double> time_limit) {
        Loaded in = load(text, knobs(seed, beta, starts, node_limit, time_limit));
        PlanResult pr;
        {
          py::gil_scoped_release unlocked;
          pr = plan_mission(in.spec, in.options);
        }
        return plan_outputs(pr);
      },
      py::arg("text"), py::arg("seed") = py::none(), py::arg("beta") = py::none(), py::arg("starts") = py::none(),
      py::arg("node_limit") = py::none(), py::arg("time_limit") = py::none());

  m.def(
      "monitor",
      [](const std::string& text, const std::string& csv, std::optional<double> beta) {
        Loaded in = load(text, knobs({}, beta, {}, {}, {}));
        Trajectory traj = io::read_trajectory_csv(csv);
        if (traj.vehicles.size() != in.spec.vehicles.size()) throw std::invalid_argument("vehicle count differs from the mission");
        MissionSpec spec = in.spec;
        if (std::any_of(spec.vehicles.begin(), spec.vehicles.end(), [](const VehicleSpec& v) { return !v.home; })) {
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
        return io::report_json(certify(cm.formula, traj, in.options.optimizer.beta, spec.epsilon), std::nullopt, {});
      },
      py::arg("text"), py::arg("trajectory_csv"), py::arg("beta") = py::none());

  m.def(
      "replay",
      [](const std::string& text, std::optional<std::string> events_csv, std::optional<std::uint64_t> seed) {
        Loaded in = load(text, knobs(seed, {}, {}, {}, {}));
        if (events_csv) in.events = io::parse_events_text(*events_csv);
        PlanResult pr;
        ExecutionTrace tr;
        {
          py::gil_scoped_release unlocked;
          pr = plan_mission(in.spec, in.options);
          tr = simulate(pr.spec, pr.trajectory(), in.events);
        }
        py::dict d = plan_outputs(pr);
        py::list completed;
        for (const auto& c : tr.completed) completed.append(pr.spec.targets[c.target].name);
        d["completed"] = completed;
        d["log"] = tr.log;
        if (!tr.replan_step) return d;
        ReplanResult rr;
        {
          py::gil_scoped_release again;
          rr = replan(tr, pr.spec, in.options);
        }
        py::dict r;
        r["step"] = rr.step;
        r["survivors"] = rr.survivors;
        r["certified"] = rr.plan.certified();
        r["report"] = io::report_json(rr.plan.report(), rr.plan.overflow, rr.plan.warnings);
        std::ostringstream os;
        io::write_trajectory_csv(os, rr.plan.trajectory(), rr.step);
        r["trajectory"] = os.str();
        r["merged"] = io::trajectory_csv(rr.merged);
        d["replan"] = r;
        return d;
      },
      py::arg("text"), py::arg("events_csv") = py::none(), py::arg("seed") = py::none());
}
