#include "stlplan/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "stlplan/motion.hpp"

namespace stlplan {

const char* to_string(Stop::Kind kind) {
  switch (kind) {
    case Stop::Kind::kStart: return "start";
    case Stop::Kind::kTarget: return "target";
    case Stop::Kind::kStation: return "station";
    case Stop::Kind::kHome: return "home";
  }
  return "?";
}

ScheduleOverflow::ScheduleOverflow(std::size_t required_steps, double minimal_horizon)
    : std::runtime_error(fmt::format("schedule needs {} steps; the horizon must be at least {} s", required_steps,
                                     minimal_horizon)),
      required_steps_(required_steps),
      minimal_horizon_(minimal_horizon) {}

std::size_t leg_duration(const Vec3& from, const Vec3& to, const VehicleSpec& v, double dt) {
  const double length = distance(from, to);
  if (length <= 0.0) return 0;
  Vec3 u{};
  for (int j = 0; j < 3; ++j) u[j] = (to[j] - from[j]) / length;
  if (!std::isfinite(directional_accel_limit(v, u))) {
    return leg_steps(length, directional_speed_limit(v, u), std::numeric_limits<double>::infinity(), dt);
  }
  return plan_leg(from, to, v, dt).total_steps();
}

namespace {

struct Builder {
  const MissionSpec& spec;
  const VehicleSpec& veh;
  VehicleSchedule out;
  std::size_t t = 0;
  Vec3 pos{};

  void go(Stop::Kind kind, std::size_t region, const Vec3& where, std::size_t dwell, int cap, bool routed) {
    const double len = distance(pos, where);
    (routed ? out.route_distance : out.extra_distance) += len;
    t += leg_duration(pos, where, veh, spec.dt);
    out.stops.push_back({kind, region, where, t, dwell, cap});
    t += dwell;
    pos = where;
  }
  void extend_dwell(std::size_t steps, int cap) {
    out.stops.back().dwell += steps;
    out.stops.back().capacity = cap;
    t += steps;
  }
};

std::size_t nearest_station(const MissionSpec& spec, const Vec3& p) {
  std::size_t best = 0;
  std::int64_t best_w = std::numeric_limits<std::int64_t>::max();
  for (std::size_t s = 0; s < spec.stations.size(); ++s) {
    const std::int64_t w = std::llround(distance(p, spec.stations[s].box.centroid()) * 1e6);
    if (w < best_w) {
      best_w = w;
      best = s;
    }
  }
  return best;
}

}  // namespace

Schedule extract_tours(const RouteSolution& sol, const RoutingModel& model, const MissionSpec& spec) {
  if (sol.status != SolveStatus::kOptimal && sol.status != SolveStatus::kFeasible) {
    throw std::invalid_argument("extract_tours needs an optimal or feasible routing");
  }
  const std::size_t n_ins = install_steps(spec);
  const std::size_t n_rs = refill_steps(spec);
  const auto& verts = model.vertices();
  Schedule sched;
  std::vector<Builder> builders;
  std::vector<bool> ended_at_home_station(spec.vehicles.size(), false);

  for (std::size_t d = 0; d < spec.vehicles.size(); ++d) {
    const auto& veh = spec.vehicles[d];
    Builder b{spec, veh, {}, 0, verts[model.depot_vertex(d)].position};
    if (veh.initial) b.out.braking = braking_profile(veh.initial->velocity, veh, spec.dt);
    b.t = b.out.braking.size();
    int c = start_capacity(spec, d);
    b.out.stops.push_back({Stop::Kind::kStart, veh.depot, b.pos, b.t, 0, c});

    const auto& trips = d < sol.routes.size() ? sol.routes[d].trips : std::vector<Trip>{};
    std::size_t here = model.depot_vertex(d);
    for (std::size_t i = 0; i < trips.size(); ++i) {
      const Trip& trip = trips[i];
      const int load = static_cast<int>(trip.targets.size());
      bool routed_first = true;
      if (i == 0) {
        if (c < load) {
          if (spec.stations.empty()) throw std::invalid_argument("magazine too small for the first trip and no station");
          const std::size_t s = nearest_station(spec, b.pos);
          c = veh.capacity;
          b.go(Stop::Kind::kStation, s, spec.stations[s].box.centroid(), n_rs, c, false);
          routed_first = false;
        }
      } else {
        if (trip.start != here) {
          b.go(Stop::Kind::kStation, verts[trip.start].region, verts[trip.start].position, 0, c, false);
          here = trip.start;
        }
        if (c < load) {
          c = veh.capacity;
          b.extend_dwell(n_rs, c);
        }
      }
      for (std::size_t k = 0; k < trip.targets.size(); ++k) {
        const auto& tv = verts[trip.targets[k]];
        c -= 1;
        b.go(Stop::Kind::kTarget, tv.region, tv.position, n_ins, c, k > 0 || routed_first);
      }
      b.go(Stop::Kind::kStation, verts[trip.end].region, verts[trip.end].position, 0, c, true);
      here = trip.end;
    }

    if (veh.home) {
      b.out.home = *veh.home;
    } else if (!trips.empty()) {
      b.out.home = spec.stations[verts[trips.back().end].region].box;
    } else {
      b.out.home = spec.depots[veh.depot].box;
    }
    const Stop& last = b.out.stops.back();
    ended_at_home_station[d] = last.kind == Stop::Kind::kStation && spec.stations[last.region].box == b.out.home;
    builders.push_back(std::move(b));
  }

  // Parking: vehicles sharing a home region take slots along its longest axis,
  // ordered by where they come from.
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t d = 0; d < builders.size(); ++d) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return builders[g.front()].out.home == builders[d].out.home; });
    if (it == groups.end()) groups.push_back({d});
    else it->push_back(d);
  }
  for (auto& members : groups) {
    const Box3 home = builders[members.front()].out.home;
    const Vec3 ext = home.extent();
    const int axis = static_cast<int>(std::max_element(ext.begin(), ext.end()) - ext.begin());
    auto approach = [&](std::size_t d) {
      const auto& stops = builders[d].out.stops;
      const bool replace = ended_at_home_station[d] && stops.size() >= 2;
      return (replace ? stops[stops.size() - 2] : stops.back()).position[axis];
    };
    std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) { return approach(a) < approach(b); });
    const double n = static_cast<double>(members.size());
    for (std::size_t slot = 0; slot < members.size(); ++slot) {
      const std::size_t d = members[slot];
      Builder& b = builders[d];
      Vec3 park = home.centroid();
      if (members.size() > 1) park[axis] = home.lower[axis] + (static_cast<double>(slot) + 0.5) * ext[axis] / n;
      if (park == b.pos) continue;
      if (ended_at_home_station[d] && b.out.stops.size() >= 2) {
        // Retarget the final routed leg straight to the slot.
        Stop last = b.out.stops.back();
        b.out.stops.pop_back();
        const Stop& prev = b.out.stops.back();
        const double centroid_leg = distance(prev.position, last.position);
        const double actual = distance(prev.position, park);
        b.out.extra_distance += actual - centroid_leg;
        b.t = prev.arrival + prev.dwell + leg_duration(prev.position, park, b.veh, spec.dt);
        last.position = park;
        last.arrival = b.t;
        b.out.stops.push_back(last);
        b.pos = park;
      } else {
        b.go(Stop::Kind::kHome, 0, park, 0, b.out.stops.back().capacity, false);
      }
    }
  }

  for (std::size_t d = 0; d < builders.size(); ++d) {
    auto& vs = builders[d].out;
    const Stop& last = vs.stops.back();
    vs.required_steps = last.arrival;
    // An empty magazine at the end still has to sit out a refill window.
    if (last.capacity == 0 && !spec.stations.empty() && !spec.targets.empty()) vs.required_steps += n_rs;
    for (const auto& s : vs.stops) {
      if (s.kind == Stop::Kind::kTarget) vs.required_steps = std::max(vs.required_steps, s.arrival + n_ins);
    }
    sched.required_steps = std::max(sched.required_steps, vs.required_steps);
    sched.route_distance += vs.route_distance;
    sched.extra_distance += vs.extra_distance;
    sched.vehicles.push_back(std::move(vs));
  }
  return sched;
}

void require_fits(const Schedule& schedule, const MissionSpec& spec) {
  if (schedule.required_steps > horizon_steps(spec)) {
    throw ScheduleOverflow(schedule.required_steps, static_cast<double>(schedule.required_steps) * spec.dt);
  }
}

MissionSpec resolve_horizon(MissionSpec spec, const Schedule& schedule) {
  if (spec.horizon > 0.0 || !spec.horizon_scale) return spec;
  const double scaled = *spec.horizon_scale * static_cast<double>(schedule.required_steps);
  std::size_t n = static_cast<std::size_t>(std::ceil(scaled - 1e-9));
  n = std::max<std::size_t>({n, schedule.required_steps, 2});
  // The dwell windows must stay shorter than the horizon.
  n = std::max({n, install_steps(spec) + 1, refill_steps(spec) + 1});
  spec.horizon = static_cast<double>(n) * spec.dt;
  spec.horizon_scale.reset();
  return spec;
}

MissionSpec assign_homes(MissionSpec spec, const Schedule& schedule) {
  for (std::size_t d = 0; d < spec.vehicles.size() && d < schedule.vehicles.size(); ++d) {
    if (!spec.vehicles[d].home) spec.vehicles[d].home = schedule.vehicles[d].home;
  }
  return spec;
}

Trajectory warm_start(const Schedule& schedule, const MissionSpec& spec) {
  const std::size_t n = horizon_steps(spec);
  std::vector<std::vector<Vec3>> accel(spec.vehicles.size());
  for (std::size_t d = 0; d < spec.vehicles.size(); ++d) {
    const auto& vs = schedule.vehicles.at(d);
    auto& a = accel[d];
    a = vs.braking;
    for (std::size_t i = 0; i + 1 < vs.stops.size(); ++i) {
      const Stop& from = vs.stops[i];
      const Stop& to = vs.stops[i + 1];
      a.resize(from.arrival + from.dwell, Vec3{});
      const LegProfile leg = plan_leg(from.position, to.position, spec.vehicles[d], spec.dt);
      if (a.size() + leg.total_steps() != to.arrival) throw std::logic_error("schedule and leg profile disagree");
      Vec3 neg{};
      for (int j = 0; j < 3; ++j) neg[j] = -leg.accel[j];
      a.insert(a.end(), leg.accel_steps, leg.accel);
      a.insert(a.end(), leg.cruise_steps, Vec3{});
      a.insert(a.end(), leg.accel_steps, neg);
    }
    a.resize(n, Vec3{});
  }
  return propagate(spec, accel);
}

}  // namespace stlplan
