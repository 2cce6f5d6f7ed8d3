#include "stlplan/simulator.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace stlplan {

const char* to_string(FailureMode m) {
  switch (m) {
    case FailureMode::kTotalLoss: return "total-loss";
  }
  return "?";
}

FailureMode failure_mode_from_string(const std::string& s) {
  if (s == "total-loss") return FailureMode::kTotalLoss;
  throw std::invalid_argument(fmt::format("unknown failure mode '{}'", s));
}

namespace {

std::vector<Installation> counted_targets(const MissionSpec& spec, std::size_t d, const std::vector<Vec3>& p) {
  std::vector<Visit> visits;
  derive_capacity(spec, d, p, &visits);
  std::vector<Installation> out;
  for (const auto& v : visits) {
    if (v.kind == Visit::Kind::kTarget && v.counted) out.push_back({v.region, d, v.first, v.last});
  }
  return out;
}

std::vector<Vec3> prefix(const std::vector<Vec3>& p, std::size_t k) {
  return {p.begin(), p.begin() + static_cast<std::ptrdiff_t>(std::min(k + 1, p.size()))};
}

void sort_installations(std::vector<Installation>& v) {
  std::sort(v.begin(), v.end(), [](const Installation& a, const Installation& b) {
    return a.first != b.first ? a.first < b.first : a.vehicle < b.vehicle;
  });
}

}  // namespace

std::vector<Installation> ExecutionTrace::completed_by(const MissionSpec& spec, std::size_t k) const {
  std::vector<Installation> out;
  for (std::size_t d = 0; d < realized.vehicles.size(); ++d) {
    const std::size_t upto = failed_at[d] ? std::min(k, *failed_at[d]) : k;
    auto part = counted_targets(spec, d, prefix(realized.vehicles[d].p, upto));
    out.insert(out.end(), part.begin(), part.end());
  }
  sort_installations(out);
  return out;
}

std::vector<std::size_t> ExecutionTrace::last_steps() const {
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < realized.vehicles.size(); ++d) out.push_back(failed_at[d] ? *failed_at[d] : realized.steps());
  return out;
}

ExecutionTrace simulate(const MissionSpec& spec, const Trajectory& plan, const std::vector<FailureEvent>& events) {
  const std::size_t n = plan.steps();
  const std::size_t fleet = plan.vehicles.size();
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.vehicle >= fleet) throw std::invalid_argument(fmt::format("event {} names unknown vehicle {}", i, e.vehicle));
    if (e.step >= n) throw std::invalid_argument(fmt::format("event {} step {} is outside [0, {})", i, e.step, n));
    if (i > 0 && events[i - 1].step > e.step) throw std::invalid_argument("events must be sorted by step");
    for (std::size_t j = 0; j < i; ++j) {
      if (events[j].vehicle == e.vehicle) throw std::invalid_argument(fmt::format("vehicle {} fails twice", e.vehicle));
    }
  }

  ExecutionTrace tr;
  tr.realized = plan;
  tr.failed_at.assign(fleet, std::nullopt);
  for (const auto& e : events) {
    tr.failed_at[e.vehicle] = e.step;
    if (!tr.replan_step) tr.replan_step = e.step;
    auto& vt = tr.realized.vehicles[e.vehicle];
    for (std::size_t k = e.step + 1; k <= n; ++k) {
      vt.p[k] = vt.p[e.step];
      vt.v[k] = vt.v[e.step];
      vt.c[k] = vt.c[e.step];
    }
    for (std::size_t k = e.step; k < n; ++k) vt.a[k] = Vec3{};
    tr.log.push_back(fmt::format("step {}: vehicle {} {}", e.step, e.vehicle, to_string(e.mode)));
  }

  tr.capacity.assign(fleet, 0);
  for (std::size_t d = 0; d < fleet; ++d) {
    const std::size_t upto = tr.failed_at[d] ? *tr.failed_at[d] : n;
    const auto& p = tr.realized.vehicles[d].p;
    auto done = counted_targets(spec, d, prefix(p, upto));
    tr.completed.insert(tr.completed.end(), done.begin(), done.end());
    tr.capacity[d] = tr.failed_at[d] ? effective_capacity(spec, d, p, upto) : tr.realized.vehicles[d].c[n];
  }
  sort_installations(tr.completed);
  for (const auto& inst : tr.completed) {
    tr.log.push_back(fmt::format("steps {}-{}: vehicle {} installed at target '{}'", inst.first, inst.last, inst.vehicle,
                                 spec.targets[inst.target].name));
  }
  return tr;
}

ReplanResult replan(const ExecutionTrace& trace, const MissionSpec& spec, const PlanOptions& options) {
  if (!trace.replan_step) throw std::invalid_argument("nothing to replan: the trace has no failure");
  ReplanResult out;
  const std::size_t k = *trace.replan_step;
  const std::size_t n = trace.realized.steps();
  out.step = k;

  for (std::size_t d = 0; d < trace.realized.vehicles.size(); ++d) {
    if (!trace.failed_at[d] || *trace.failed_at[d] > k) out.survivors.push_back(d);
  }
  if (out.survivors.empty()) throw std::invalid_argument("no surviving vehicle to replan with");

  std::vector<bool> done(spec.targets.size(), false);
  for (const auto& inst : trace.completed_by(spec, k)) done[inst.target] = true;

  MissionSpec r = spec;
  r.targets.clear();
  for (std::size_t q = 0; q < spec.targets.size(); ++q) {
    if (done[q]) {
      out.completed_targets.push_back(q);
    } else {
      out.remaining_targets.push_back(q);
      r.targets.push_back(spec.targets[q]);
    }
  }
  r.vehicles.clear();
  for (auto d : out.survivors) {
    VehicleSpec v = spec.vehicles[d];
    const auto& vt = trace.realized.vehicles[d];
    v.initial = InitialState{vt.p[k], vt.v[k], effective_capacity(spec, d, vt.p, k)};
    r.vehicles.push_back(std::move(v));
  }
  r.horizon = static_cast<double>(n - k) * spec.dt;
  r.horizon_scale.reset();
  out.residual = r;

  if (r.targets.empty()) {
    // Nothing left: survivors keep the remainder of their plan.
    out.reused_suffix = true;
    PlanResult& pr = out.plan;
    require_valid(r);
    pr.spec = r;
    pr.model = build_model(r, &pr.warnings);
    pr.routes = solve(*pr.model, options.budget);
    pr.mission = compile(r);
    Trajectory suffix;
    suffix.dt = spec.dt;
    for (auto d : out.survivors) {
      const auto& vt = trace.realized.vehicles[d];
      VehicleTrajectory s;
      s.p.assign(vt.p.begin() + static_cast<std::ptrdiff_t>(k), vt.p.end());
      s.v.assign(vt.v.begin() + static_cast<std::ptrdiff_t>(k), vt.v.end());
      s.a.assign(vt.a.begin() + static_cast<std::ptrdiff_t>(k), vt.a.end());
      suffix.vehicles.push_back(std::move(s));
    }
    refresh_capacity(r, suffix);
    pr.warm = suffix;
    pr.optimized.trajectory = suffix;
    OptimizerParams params = options.optimizer;
    pr.optimized.report = certify(pr.mission.formula, suffix, params.beta, r.epsilon);
  } else {
    out.plan = plan_mission(r, options);
  }

  out.merged = trace.realized;
  const Trajectory& fresh = out.plan.trajectory();
  for (std::size_t i = 0; i < out.survivors.size(); ++i) {
    auto& m = out.merged.vehicles[out.survivors[i]];
    const auto& f = fresh.vehicles[i];
    m.p.resize(k + 1);
    m.v.resize(k + 1);
    m.c.resize(k + 1);
    m.a.resize(k);
    m.p.insert(m.p.end(), f.p.begin() + 1, f.p.end());
    m.v.insert(m.v.end(), f.v.begin() + 1, f.v.end());
    m.c.insert(m.c.end(), f.c.begin() + 1, f.c.end());
    m.a.insert(m.a.end(), f.a.begin(), f.a.end());
  }
  return out;
}

}  // namespace stlplan
