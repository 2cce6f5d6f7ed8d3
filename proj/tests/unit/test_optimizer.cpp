#include <doctest.h>

#include <cstdlib>

#include "fixtures.hpp"
#include "stlplan/compiler.hpp"
#include "stlplan/planner.hpp"

using namespace stlplan;

namespace {


bool same(const Trajectory& a, const Trajectory& b) {
  if (a.vehicles.size() != b.vehicles.size()) return false;
  for (std::size_t d = 0; d < a.vehicles.size(); ++d) {
    if (a.vehicles[d].p != b.vehicles[d].p || a.vehicles[d].a != b.vehicles[d].a || a.vehicles[d].c != b.vehicles[d].c) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("optimizer") {
  TEST_CASE("parameter validation") {
    OptimizerParams p;
    CHECK_NOTHROW(p.validate());
    p.beta = 0.0;
    CHECK_THROWS(p.validate());
    p = {};
    p.epsilon = -1.0;
    CHECK_THROWS(p.validate());
    p = {};
    p.max_iterations = 0;
    CHECK_THROWS(p.validate());
  }

  TEST_CASE("worker cap from the environment") {
    setenv("PLANNER_THREADS", "2", 1);
    CHECK(worker_count(8) == 2);
    CHECK(worker_count(1) == 1);
    setenv("PLANNER_THREADS", "junk", 1);
    CHECK(worker_count(3) == 3);
    unsetenv("PLANNER_THREADS");
    CHECK(worker_count(0) >= 1);
  }

  TEST_CASE("certify reports the minimum top-level clause") {
    MissionSpec s = fixture::corridor();
    s.targets.clear();
    s.obstacles = {{"box", fixture::cube(3, 1, 1)}};
    s.vehicles[0].home = s.depots[0].box;
    CompiledMission cm = compile(s);
    Trajectory t = propagate(s, {std::vector<Vec3>(cm.steps, Vec3{})});
    RobustnessReport r = certify(cm.formula, t, 10.0, 0.1);
    double lo = 1e300;
    for (const auto& c : r.top_level) lo = std::min(lo, c.exact);
    CHECK(r.exact == lo);
    CHECK(r.satisfied == (r.exact >= 0.1));
    // One sample inside the obstacle makes its clause negative.
    t.vehicles[0].p[3] = {3, 1, 1};
    RobustnessReport bad = certify(cm.formula, t, 10.0, 0.1);
    CHECK(bad.binding == "safety/v0");
    bool seen = false;
    for (const auto& c : bad.clauses) {
      if (c.label == "obstacle[box]/v0") {
        CHECK(c.value < 0.0);
        seen = true;
      }
    }
    CHECK(seen);
    CHECK_FALSE(bad.satisfied);
  }

  TEST_CASE("objective gradient matches finite differences") {
    MissionSpec s = fixture::corridor();
    s.depots.push_back({"d1", fixture::cube(3, 1.5, 1)});
    s.vehicles.push_back(fixture::vehicle(1, 1));
    for (auto& v : s.vehicles) v.home = s.stations[0].box;
    s.horizon = 4.0;
    CompiledMission cm = compile(s);
    std::vector<std::vector<Vec3>> a(2, std::vector<Vec3>(cm.steps, Vec3{0.3, 0.1, -0.2}));
    a[1] = std::vector<Vec3>(cm.steps, Vec3{-0.4, -0.2, 0.1});
    OptimizerParams params;
    params.energy_weight = 0.01;
    const ObjectiveEval e = objective(cm.formula, s, a, params, true);
    const double h = 1e-6;
    double worst = 0.0, scale = 0.0;
    for (std::size_t d = 0; d < 2; ++d) {
      for (std::size_t k = 0; k < cm.steps; ++k) {
        for (int j = 0; j < 3; ++j) {
          auto up = a, dn = a;
          up[d][k][j] += h;
          dn[d][k][j] -= h;
          const double fd =
              (objective(cm.formula, s, up, params, false).value - objective(cm.formula, s, dn, params, false).value) / (2 * h);
          worst = std::max(worst, std::abs(fd - e.gradient[d][k][j]));
          scale = std::max(scale, std::abs(fd));
        }
      }
    }
    CHECK(worst / scale < 1e-4);
  }

  TEST_CASE("gradient step separates converging vehicles") {
    MissionSpec s;
    s.workspace = {{0, 0, 0}, {20, 20, 20}};
    s.depots = {{"a", fixture::cube(8, 10, 10)}, {"b", fixture::cube(12, 10, 10)}};
    s.vehicles = {fixture::vehicle(0, 1), fixture::vehicle(1, 1)};
    s.vehicles[0].initial = InitialState{{9.4, 10, 10}, {1, 0, 0}, 1};
    s.vehicles[1].initial = InitialState{{10.6, 10, 10}, {-1, 0, 0}, 1};
    s.vehicles[0].home = s.depots[0].box;
    s.vehicles[1].home = s.depots[1].box;
    s.separation = 1.0;
    s.horizon = 1.0;
    CompiledMission cm = compile(s);
    std::vector<std::vector<Vec3>> a(2, std::vector<Vec3>(cm.steps, Vec3{}));
    OptimizerParams params;
    const ObjectiveEval e = objective(cm.formula, s, a, params, true);
    auto step = a;
    for (std::size_t d = 0; d < 2; ++d) {
      for (std::size_t k = 0; k < cm.steps; ++k) {
        for (int j = 0; j < 3; ++j) step[d][k][j] += 1e-3 * e.gradient[d][k][j];
      }
    }
    const Trajectory before = propagate(s, a);
    const Trajectory after = propagate(s, step);
    CHECK(min_pairwise_distance(after) > min_pairwise_distance(before));
    CHECK(objective(cm.formula, s, step, params, false).value > e.value);
  }

  TEST_CASE("never worse than the warm start and respects bounds") {
    MissionSpec s = fixture::corridor();
    s.targets.clear();
    s.vehicles[0].home = s.depots[0].box;
    CompiledMission cm = compile(s);
    std::vector<std::vector<Vec3>> a(1, std::vector<Vec3>(cm.steps, Vec3{}));
    a[0][0] = {0.5, 0, 0};
    a[0][1] = {-0.5, 0, 0};
    Trajectory warm = propagate(s, a);
    OptimizerParams params;
    params.max_iterations = 30;
    OptimizeResult r = optimize(cm.formula, s, warm, params);
    CHECK(r.report.exact >= certify(cm.formula, warm, 10.0, 0.1).exact);
    CHECK(accelerations_within(s, r.trajectory));
    CHECK(dynamics_residual(r.trajectory) < 1e-9);
    CHECK(velocity_violation(s, r.trajectory) <= 1e-9);
    CHECK(r.starts.size() == params.starts);
  }

  TEST_CASE("single target mission certifies") {
    PlanResult pr = plan_mission(fixture::corridor(), {});
    CHECK(pr.certified());
    CHECK(pr.report().exact >= 0.1);
    CHECK(pr.report().exact >= certify(pr.mission.formula, pr.warm, 10.0, 0.1).exact);
  }

  TEST_CASE("results do not depend on the worker count") {
    MissionSpec s = fixture::corridor();
    OptimizerParams p;
    p.max_iterations = 40;
    p.threads = 4;
    PlanOptions o{{}, p};
    setenv("PLANNER_THREADS", "1", 1);
    PlanResult one = plan_mission(s, o);
    setenv("PLANNER_THREADS", "4", 1);
    PlanResult four = plan_mission(s, o);
    unsetenv("PLANNER_THREADS");
    CHECK(same(one.trajectory(), four.trajectory()));
    CHECK(one.report().exact == four.report().exact);
    p.seed = 99;
    PlanResult other = plan_mission(s, {{}, p});
    CHECK(other.report().exact >= certify(other.mission.formula, other.warm, 10.0, 0.1).exact);
  }
}
