#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "stlplan/compiler.hpp"
#include "stlplan/io.hpp"
#include "stlplan/schedule.hpp"

using namespace stlplan;

namespace {

// Depot and station share x = 1; targets at x = 2 and x = 3.
MissionSpec line_mission() {
  MissionSpec s;
  s.workspace = {{0, 0, 0}, {6, 3, 3}};
  s.depots = {{"d0", fixture::cube(1, 1, 1, 0.25)}};
  s.stations = {{"s0", fixture::cube(1, 2, 1, 0.25)}};
  s.targets = {{"t1", fixture::cube(2, 1, 1, 0.25)}, {"t2", fixture::cube(3, 1, 1, 0.25)}};
  s.vehicles = {fixture::vehicle(0, 2, 1.0, std::numeric_limits<double>::infinity())};
  s.horizon = 30.0;
  s.install_time = 2.0;
  s.refill_time = 1.0;
  s.dt = 1.0;
  return s;
}

struct Planned {
  RoutingModel model;
  RouteSolution sol;
  Schedule schedule;
};

Planned route(const MissionSpec& s) {
  RoutingModel m = build_model(s);
  RouteSolution sol = solve(m, {});
  REQUIRE(sol.status == SolveStatus::kOptimal);
  Schedule sch = extract_tours(sol, m, s);
  return {std::move(m), std::move(sol), std::move(sch)};
}

}  // namespace

TEST_SUITE("schedule") {
  TEST_CASE("hand-timed line instance") {
    // v = 1, impulsive accelerations, dt = 1, T_ins = 2: t1 reached at 1,
    // held 2 steps, t2 reached at 4.
    MissionSpec s = line_mission();
    Planned p = route(s);
    const auto& stops = p.schedule.vehicles[0].stops;
    std::vector<std::size_t> arrivals;
    for (const auto& st : stops) {
      if (st.kind == Stop::Kind::kTarget) {
        arrivals.push_back(st.arrival);
        CHECK(st.dwell == 2);
      }
    }
    CHECK(arrivals == std::vector<std::size_t>{1, 4});
    CHECK(stops.front().kind == Stop::Kind::kStart);
    // The objective sums per-edge weights rounded to micrometres.
    CHECK(std::abs(p.schedule.route_distance - p.sol.objective) <= 3e-6);
  }

  TEST_CASE("empty route gives an empty schedule") {
    MissionSpec s = line_mission();
    s.targets.clear();
    Planned p = route(s);
    const auto& vs = p.schedule.vehicles[0];
    CHECK(vs.route_distance == 0.0);
    for (const auto& st : vs.stops) CHECK(st.kind != Stop::Kind::kTarget);
  }

  TEST_CASE("overflow carries the minimal horizon") {
    MissionSpec s = line_mission();
    Planned p = route(s);
    s.horizon = 3.0;
    try {
      require_fits(p.schedule, s);
      FAIL("expected overflow");
    } catch (const ScheduleOverflow& e) {
      CHECK(e.required_steps() == p.schedule.required_steps);
      CHECK(e.minimal_horizon() == doctest::Approx(static_cast<double>(e.required_steps()) * s.dt));
    }
  }

  TEST_CASE("scaled horizon and homes") {
    MissionSpec s = line_mission();
    s.horizon = 0.0;
    s.horizon_scale = 1.5;
    Planned p = route(s);
    MissionSpec r = assign_homes(resolve_horizon(s, p.schedule), p.schedule);
    CHECK_FALSE(r.horizon_scale.has_value());
    CHECK(horizon_steps(r) == static_cast<std::size_t>(std::ceil(1.5 * static_cast<double>(p.schedule.required_steps))));
    REQUIRE(r.vehicles[0].home.has_value());
    CHECK(*r.vehicles[0].home == s.stations[0].box);
    CHECK_NOTHROW(require_fits(p.schedule, r));
  }

  TEST_CASE("capacity-limited vehicle refills between trips") {
    MissionSpec s = fixture::corridor();
    s.targets.push_back({"t1", fixture::cube(5, 3, 1)});
    s.horizon = 60.0;
    Planned p = route(s);
    int station_holds = 0;
    for (const auto& st : p.schedule.vehicles[0].stops) {
      if (st.kind == Stop::Kind::kStation && st.dwell >= refill_steps(s)) ++station_holds;
      CHECK(st.capacity >= 0);
    }
    CHECK(station_holds >= 1);
  }

  TEST_CASE("warm start realises the schedule") {
    MissionSpec s = fixture::corridor();
    Planned p = route(s);
    MissionSpec r = assign_homes(s, p.schedule);
    Trajectory w = warm_start(p.schedule, r);
    CHECK(w.steps() == horizon_steps(r));
    CHECK(dynamics_residual(w) < 1e-9);
    CHECK(accelerations_within(r, w));
    CHECK(velocity_violation(r, w) <= 1e-12);
    for (const auto& st : p.schedule.vehicles[0].stops) {
      for (int j = 0; j < 3; ++j) CHECK(w.vehicles[0].p[st.arrival][j] == doctest::Approx(st.position[j]).epsilon(1e-9));
    }
    auto ins = installations(r, w);
    REQUIRE(ins.size() == 1);
    CompiledMission cm = compile(r);
    CHECK(eval_exact(cm.formula, w.to_signal()) > 0.0);
  }

  TEST_CASE("desk warm start keeps the safety clauses positive") {
    MissionSpec s = io::parse_mission(fixture::data_path("desk.json")).spec;
    Planned p = route(s);
    MissionSpec r = assign_homes(resolve_horizon(s, p.schedule), p.schedule);
    Trajectory w = warm_start(p.schedule, r);
    CompiledMission cm = compile(r);
    const Signal sig = w.to_signal();
    for (const auto& c : cm.formula->children) {
      if (c->label.rfind("safety/", 0) == 0) CHECK(eval_exact(c, sig) > 0.0);
    }
    // One station: both vehicles go home there, to distinct parking slots.
    CHECK(p.schedule.vehicles[0].home == p.schedule.vehicles[1].home);
    const Vec3 a = p.schedule.vehicles[0].stops.back().position;
    const Vec3 b = p.schedule.vehicles[1].stops.back().position;
    CHECK(distance(a, b) >= r.separation);
  }
}
