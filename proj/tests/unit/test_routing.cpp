#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <random>

#include "route_oracle.hpp"
#include "stlplan/routing.hpp"

using namespace stlplan;
using VK = RoutingModel::VertexKind;

namespace {

RoutingModel to_model(const oracle::Instance& in) {
  std::vector<RoutingModel::Vertex> v;
  for (std::size_t d = 0; d < in.depots.size(); ++d) v.push_back({VK::kDepot, "depot", in.depots[d], d});
  for (std::size_t s = 0; s < in.stations.size(); ++s) v.push_back({VK::kStation, "rs", in.stations[s], s});
  for (std::size_t t = 0; t < in.targets.size(); ++t) v.push_back({VK::kTarget, "tr", in.targets[t], t});
  return RoutingModel(std::move(v), in.depots.size(), in.capacity);
}

oracle::Instance random_instance(std::mt19937_64& rng, int targets, int vehicles, int stations, int cap) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  oracle::Instance in;
  in.capacity = cap;
  for (int d = 0; d < vehicles; ++d) in.depots.push_back({u(rng), u(rng), 0.0});
  for (int s = 0; s < stations; ++s) in.stations.push_back({u(rng), u(rng), 0.0});
  for (int t = 0; t < targets; ++t) in.targets.push_back({u(rng), u(rng), u(rng) * 0.3});
  return in;
}

std::vector<int> z_of(const RoutingModel& m, const oracle::Instance& in,
                      const std::vector<std::vector<oracle::RandomTrip>>& routes) {
  const std::size_t nd = in.depots.size();
  const std::size_t ns = in.stations.size();
  auto facility = [&](int f) { return f < 0 ? static_cast<std::size_t>(-1 - f) : nd + static_cast<std::size_t>(f); };
  std::vector<int> z(m.z_count(), 0);
  for (std::size_t d = 0; d < routes.size(); ++d) {
    for (const auto& trip : routes[d]) {
      std::size_t prev = facility(trip.start);
      for (int t : trip.targets) {
        const std::size_t cur = nd + ns + static_cast<std::size_t>(t);
        z[m.z_index(d, m.edge_index(prev, cur))] += 1;
        prev = cur;
      }
      z[m.z_index(d, m.edge_index(prev, facility(trip.end)))] += 1;
    }
  }
  return z;
}

}  // namespace

TEST_SUITE("routing") {
  TEST_CASE("model layout and weights") {
    oracle::Instance in;
    in.depots = {{0, 0, 0}};
    in.stations = {{1, 1, 0}};
    in.targets = {{3, 4, 0}};
    const auto m = to_model(in);
    CHECK(m.vertices().size() == 3);
    CHECK(m.edges().size() == 3);
    CHECK(m.weight(0, 2) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(m.z_upper(0, m.edge_index(0, 1)) == 0);
    CHECK(m.z_upper(0, m.edge_index(0, 2)) == 1);
    CHECK(m.z_upper(0, m.edge_index(1, 2)) == 2);
    CHECK(m.variable_count() == 4);
  }

  TEST_CASE("rounded capacity bound") {
    CHECK(lower_bound_h(0, 2) == 0);
    CHECK(lower_bound_h(1, 2) == 1);
    CHECK(lower_bound_h(4, 2) == 2);
    CHECK(lower_bound_h(5, 2) == 3);
    CHECK(lower_bound_h(6, 1) == 6);
    CHECK_THROWS(lower_bound_h(3, 0));
  }

  TEST_CASE("line instance with co-located station") {
    oracle::Instance in;
    in.depots = {{0, 0, 0}};
    in.stations = {{0, 0, 0}};
    in.targets = {{1, 0, 0}, {2, 0, 0}};
    in.capacity = 2;
    CHECK(oracle::optimum(in, false) == 4'000'000);
    const auto m = to_model(in);
    const auto sol = solve(m);
    REQUIRE(sol.status == SolveStatus::kOptimal);
    CHECK(sol.objective_um == 4'000'000);
    REQUIRE(sol.routes.size() == 1);
    REQUIRE(sol.routes[0].trips.size() == 1);
    const auto& trip = sol.routes[0].trips[0];
    CHECK(trip.start == 0);
    // depot->t1->t2->station and depot->t2->t1->station both cost 4.
    auto served = trip.targets;
    std::sort(served.begin(), served.end());
    CHECK(served == std::vector<std::size_t>{2, 3});
    CHECK(trip.end == 1);
    CHECK(check_solution(m, sol).empty());
  }

  TEST_CASE("capacity one forces a trip per target") {
    oracle::Instance in;
    in.depots = {{0, 0, 0}};
    in.stations = {{0, 0, 0}};
    in.targets = {{1, 0, 0}, {2, 0, 0}};
    in.capacity = 1;
    const auto sol = solve(to_model(in));
    REQUIRE(sol.status == SolveStatus::kOptimal);
    // depot->t1->station (2) then station->t2->station (4)
    CHECK(sol.objective_um == 6'000'000);
    CHECK(sol.routes[0].trips.size() == 2);
    CHECK_FALSE(sol.cuts.empty());
  }

  TEST_CASE("no station leaves the model infeasible") {
    oracle::Instance in;
    in.depots = {{0, 0, 0}};
    in.targets = {{1, 0, 0}};
    in.capacity = 2;
    CHECK(oracle::optimum(in, false) >= oracle::kNone);
    const auto sol = solve(to_model(in));
    CHECK(sol.status == SolveStatus::kInfeasible);
    CHECK_FALSE(sol.infeasibility_hint.empty());
  }

  TEST_CASE("idle vehicles when targets are scarce") {
    oracle::Instance in;
    in.depots = {{0, 0, 0}, {10, 0, 0}};
    in.stations = {{5, 5, 0}};
    in.targets = {{9, 0, 0}};
    in.capacity = 2;
    const auto m = to_model(in);
    CHECK_FALSE(m.strict_depot_degree());
    const auto sol = solve(m);
    REQUIRE(sol.status == SolveStatus::kOptimal);
    CHECK(sol.objective_um == oracle::optimum(in, true));
    CHECK(sol.routes[0].trips.empty());
    CHECK(sol.routes[1].trips.size() == 1);
    CHECK(check_solution(m, sol).empty());
  }

  TEST_CASE("no targets") {
    oracle::Instance in;
    in.depots = {{0, 0, 0}};
    in.stations = {{1, 0, 0}};
    const auto sol = solve(to_model(in));
    CHECK(sol.status == SolveStatus::kOptimal);
    CHECK(sol.objective_um == 0);
  }

  TEST_CASE("exact against exhaustive enumeration") {
    std::mt19937_64 rng(20261019);
    int instances = 0;
    for (int vehicles = 1; vehicles <= 2; ++vehicles) {
      for (int cap = 1; cap <= 3; ++cap) {
        for (int targets = 1; targets <= 5; ++targets) {
          for (int rep = 0; rep < 2; ++rep) {
            const int stations = 1 + static_cast<int>(rng() % 2);
            const auto in = random_instance(rng, targets, vehicles, stations, cap);
            const auto m = to_model(in);
            const auto t0 = std::chrono::steady_clock::now();
            const auto sol = solve(m);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            CAPTURE(vehicles);
            CAPTURE(cap);
            CAPTURE(targets);
            REQUIRE(sol.status == SolveStatus::kOptimal);
            CHECK(sol.objective_um == oracle::optimum(in, targets < vehicles));
            CHECK(check_solution(m, sol).empty());
            CHECK(secs < 10.0);
            for (std::size_t k = 0; k + 1 < sol.node_bounds_trace.size(); k += 2) {
              CHECK(sol.node_bounds_trace[k + 1] >= sol.node_bounds_trace[k] - 1e-7);
            }
            // Every recorded cut holds on random feasible routings.
            for (int s = 0; s < 20; ++s) {
              const auto z = z_of(m, in, oracle::random_routing(in, targets < vehicles, rng));
              for (const auto& cut : sol.cuts) {
                CHECK(boundary_flow(m, z, cut) >= 2 * lower_bound_h(static_cast<std::int64_t>(cut.size()), cap));
              }
            }
            ++instances;
          }
        }
      }
    }
    CHECK(instances == 60);
  }

  TEST_CASE("checker flags tampered solutions") {
    std::mt19937_64 rng(7);
    const auto in = random_instance(rng, 4, 2, 1, 2);
    const auto m = to_model(in);
    auto sol = solve(m);
    REQUIRE(check_solution(m, sol).empty());
    auto broken = sol;
    broken.routes[0].trips.front().targets.pop_back();
    CHECK_FALSE(check_solution(m, broken).empty());
    broken = sol;
    for (auto& v : broken.z) v = 0;
    CHECK_FALSE(check_solution(m, broken).empty());
  }

  TEST_CASE("budget exhaustion reports a bound") {
    std::mt19937_64 rng(11);
    const auto in = random_instance(rng, 6, 2, 2, 2);
    SolveBudget budget;
    budget.node_limit = 1;
    const auto sol = solve(to_model(in), budget);
    CHECK((sol.status == SolveStatus::kFeasible || sol.status == SolveStatus::kBudgetExhausted ||
           sol.status == SolveStatus::kOptimal));
    CHECK(sol.nodes <= 1);
    CHECK(sol.bound <= static_cast<double>(oracle::optimum(in, false)) * 1e-6 + 1e-6);
  }
}
