#include "stlplan/compiler.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace stlplan {

namespace {

ChannelRef ref(std::size_t vehicle, std::size_t slot) {
  return {channel_name(vehicle, slot), channel_index(vehicle, slot)};
}

Formula half_space(std::size_t vehicle, int axis, double gain, double offset) {
  AffinePredicate p;
  p.terms.push_back({ref(vehicle, kPosChannel + axis), gain});
  p.offset = offset;
  return make_predicate(std::move(p));
}

Formula capacity_indicator(std::size_t vehicle, IndicatorPredicate::Relation rel, double value) {
  IndicatorPredicate p;
  p.channel = ref(vehicle, kCapChannel);
  p.relation = rel;
  p.value = value;
  return make_predicate(std::move(p));
}

std::string vtag(std::size_t d) { return fmt::format("v{}", d); }

}  // namespace

Formula box_membership_predicates(const Box3& region, std::size_t vehicle, const std::string& label) {
  std::vector<Formula> kids;
  kids.reserve(6);
  for (int j = 0; j < 3; ++j) {
    kids.push_back(half_space(vehicle, j, 1.0, -region.lower[j]));
    kids.push_back(half_space(vehicle, j, -1.0, region.upper[j]));
  }
  return make_and(std::move(kids), label);
}

Formula box_exclusion_predicates(const Box3& region, std::size_t vehicle, const std::string& label) {
  std::vector<Formula> kids;
  kids.reserve(6);
  for (int j = 0; j < 3; ++j) {
    kids.push_back(half_space(vehicle, j, -1.0, region.lower[j]));
    kids.push_back(half_space(vehicle, j, 1.0, -region.upper[j]));
  }
  return make_or(std::move(kids), label);
}

Formula separation_formula(std::size_t vehicle_a, std::size_t vehicle_b, double threshold) {
  if (vehicle_a == vehicle_b) throw std::invalid_argument("separation needs two distinct vehicles");
  DistancePredicate p;
  for (int j = 0; j < 3; ++j) {
    p.a.push_back(ref(vehicle_a, kPosChannel + j));
    p.b.push_back(ref(vehicle_b, kPosChannel + j));
  }
  p.threshold = threshold;
  return make_predicate(std::move(p), fmt::format("separation/{}-{}", vtag(vehicle_a), vtag(vehicle_b)));
}

CompiledMission compile(const MissionSpec& spec) {
  auto issues = validate(spec);
  if (!(spec.horizon > 0.0)) issues.push_back("compile needs a fixed horizon");
  for (std::size_t d = 0; d < spec.vehicles.size(); ++d) {
    if (!spec.vehicles[d].home) issues.push_back(fmt::format("vehicle {} has no home region assigned", d));
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  const std::size_t fleet = spec.vehicles.size();
  const std::size_t n = horizon_steps(spec);
  const std::size_t n_ins = install_steps(spec);
  const std::size_t n_rs = refill_steps(spec);
  if (n < 1) throw ValidationError({"horizon must span at least one sampling step"});

  std::vector<Formula> clauses;

  // Safety: workspace, obstacle avoidance and mutual separation at all times.
  for (std::size_t d = 0; d < fleet; ++d) {
    std::vector<Formula> groups;
    groups.push_back(box_membership_predicates(spec.workspace, d, "workspace/" + vtag(d)));
    if (!spec.obstacles.empty()) {
      std::vector<Formula> avoid;
      for (const auto& o : spec.obstacles) {
        avoid.push_back(box_exclusion_predicates(o.box, d, fmt::format("obstacle[{}]/{}", o.name, vtag(d))));
      }
      groups.push_back(make_and(std::move(avoid), "obstacles/" + vtag(d)));
    }
    if (fleet > 1) {
      std::vector<Formula> sep;
      for (std::size_t m = 0; m < fleet; ++m) {
        if (m != d) sep.push_back(separation_formula(d, m, spec.separation));
      }
      groups.push_back(make_and(std::move(sep), "separation/" + vtag(d)));
    }
    Formula body = groups.size() == 1 ? groups.front() : make_and(std::move(groups));
    clauses.push_back(make_always({0, n}, std::move(body), "safety/" + vtag(d)));
  }

  // Targets: some vehicle with a loaded magazine dwells inside for the install time.
  const std::size_t target_window = std::min(steps_floor(spec.horizon - spec.install_time, spec.dt), n - n_ins);
  for (const auto& t : spec.targets) {
    std::vector<Formula> any;
    for (std::size_t d = 0; d < fleet; ++d) {
      Formula loaded = capacity_indicator(d, IndicatorPredicate::Relation::kGreater, 0.0);
      Formula dwell = make_and({std::move(loaded), box_membership_predicates(t.box, d)});
      any.push_back(make_always({0, n_ins}, std::move(dwell), fmt::format("target[{}]/{}", t.name, vtag(d))));
    }
    clauses.push_back(make_eventually({0, target_window}, make_or(std::move(any)), fmt::format("target[{}]", t.name)));
  }

  // Refill: an empty vehicle dwells in some station for the refill time.
  if (!spec.targets.empty() && !spec.stations.empty()) {
    const std::size_t refill_window = std::min(steps_floor(spec.horizon - spec.refill_time, spec.dt), n - n_rs);
    for (std::size_t d = 0; d < fleet; ++d) {
      std::vector<Formula> any;
      for (const auto& s : spec.stations) {
        Formula empty = capacity_indicator(d, IndicatorPredicate::Relation::kEqual, 0.0);
        any.push_back(make_always({0, n_rs}, make_implies(std::move(empty), box_membership_predicates(s.box, d))));
      }
      clauses.push_back(make_eventually({0, refill_window}, make_or(std::move(any)), "refill/" + vtag(d)));
    }
  }

  // Home absorption: once inside the home region, stay there. Empty window when N < 2.
  for (std::size_t d = 0; d < fleet && n >= 2; ++d) {
    const Box3& home = *spec.vehicles[d].home;
    Formula inside_now = box_membership_predicates(home, d);
    Formula inside_next = make_after(1, box_membership_predicates(home, d));
    clauses.push_back(make_always({1, n - 1}, make_implies(std::move(inside_now), std::move(inside_next)),
                                  "home/" + vtag(d)));
  }

  CompiledMission out;
  out.formula = make_and(std::move(clauses), "mission");
  out.channels = fleet_channel_names(fleet);
  out.steps = n;

  auto bind = [&](std::string sym, std::string field) { out.symbols.push_back({std::move(sym), std::move(field)}); };
  bind("T_N", "horizon");
  bind("T_ins", "install_time");
  bind("T_rs", "refill_time");
  bind("Gamma_dis", "separation");
  bind("epsilon", "epsilon");
  bind("dt", "dt");
  bind("ws", "workspace");
  for (std::size_t q = 0; q < spec.obstacles.size(); ++q) bind(fmt::format("obs,{}", q + 1), fmt::format("obstacles[{}]", q));
  for (std::size_t q = 0; q < spec.targets.size(); ++q) bind(fmt::format("tr,{}", q + 1), fmt::format("targets[{}]", q));
  for (std::size_t q = 0; q < spec.stations.size(); ++q) bind(fmt::format("rs,{}", q + 1), fmt::format("stations[{}]", q));
  for (std::size_t d = 0; d < fleet; ++d) {
    bind(fmt::format("c_bar[{}]", d), fmt::format("vehicles[{}].capacity", d));
    bind(fmt::format("v_bounds[{}]", d), fmt::format("vehicles[{}].velocity", d));
    bind(fmt::format("a_bounds[{}]", d), fmt::format("vehicles[{}].acceleration", d));
    bind(fmt::format("hm[{}]", d), fmt::format("vehicles[{}].home", d));
    bind(fmt::format("c[{}]", d), channel_name(d, kCapChannel));
    for (int j = 0; j < 3; ++j) {
      bind(fmt::format("p{}[{}]", j + 1, d), channel_name(d, kPosChannel + j));
      bind(fmt::format("v{}[{}]", j + 1, d), channel_name(d, kVelChannel + j));
    }
  }
  return out;
}

std::size_t expected_node_count(const MissionSpec& spec) {
  const std::size_t fleet = spec.vehicles.size();
  const std::size_t obs = spec.obstacles.size();
  const std::size_t tr = spec.targets.size();
  const std::size_t rs = spec.stations.size();
  constexpr std::size_t kBox = 7;  // conjunction + six half-spaces

  const std::size_t groups = 1 + (obs > 0 ? 1 : 0) + (fleet > 1 ? 1 : 0);
  const std::size_t safety = 1 + (groups > 1 ? 1 : 0) + kBox + (obs > 0 ? 1 + kBox * obs : 0) +
                             (fleet > 1 ? 1 + (fleet - 1) : 0);
  const std::size_t target = 2 + fleet * (3 + kBox);
  const std::size_t refill = (tr > 0 && rs > 0) ? 2 + rs * (3 + kBox) : 0;
  const std::size_t home = horizon_steps(spec) >= 2 ? 3 + 2 * kBox : 0;
  return 1 + fleet * safety + tr * target + fleet * refill + fleet * home;
}

}  // namespace stlplan
