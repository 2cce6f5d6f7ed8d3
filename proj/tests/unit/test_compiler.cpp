#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "stlplan/compiler.hpp"

using namespace stlplan;

namespace {

Signal fleet_signal(std::size_t fleet, std::size_t length, double dt = 0.5) {
  return Signal(dt, fleet_channel_names(fleet), length);
}

void place(Signal& s, std::size_t d, std::size_t k, const Vec3& p, int c = 1) {
  for (int j = 0; j < 3; ++j) s.at(channel_index(d, kPosChannel + j), k) = p[j];
  s.at(channel_index(d, kCapChannel), k) = c;
}

}  // namespace

TEST_SUITE("compiler") {
  TEST_CASE("box membership margins and structure") {
    Box3 unit{{0, 0, 0}, {1, 1, 1}};
    Formula f = box_membership_predicates(unit, 0);
    Signal s = fleet_signal(1, 1);
    place(s, 0, 0, {0.5, 0.5, 0.5});
    CHECK(eval_exact(f, s) == 0.5);
    place(s, 0, 0, {2.0, 0.5, 0.5});
    CHECK(eval_exact(f, s) == -1.0);

    std::vector<Formula> manual;
    for (int j = 0; j < 3; ++j) {
      const ChannelRef r{channel_name(0, j), channel_index(0, j)};
      manual.push_back(make_predicate(AffinePredicate{{{r, 1.0}}, -unit.lower[j]}));
      manual.push_back(make_predicate(AffinePredicate{{{r, -1.0}}, unit.upper[j]}));
    }
    CHECK(to_json_text(f) == to_json_text(make_and(manual)));
  }

  TEST_CASE("obstacle exclusion is negative inside") {
    Box3 ob{{0, 0, 0}, {2, 2, 2}};
    Signal s = fleet_signal(1, 1);
    place(s, 0, 0, {1, 1, 1});
    CHECK(eval_exact(box_exclusion_predicates(ob, 0), s) == -1.0);
    place(s, 0, 0, {3, 1, 1});
    CHECK(eval_exact(box_exclusion_predicates(ob, 0), s) == 1.0);
  }

  TEST_CASE("separation margin and gradient") {
    Formula f = separation_formula(0, 1, 2.0);
    Signal s = fleet_signal(2, 1);
    place(s, 0, 0, {0, 0, 0});
    place(s, 1, 0, {3, 4, 0});
    CHECK(eval_exact(f, s) == doctest::Approx(3.0));
    place(s, 1, 0, {0, 0, 0});
    CHECK(eval_exact(f, s) == -2.0);
    CHECK_THROWS(separation_formula(1, 1, 2.0));

    place(s, 0, 0, {0.3, -0.2, 0.7});
    place(s, 1, 0, {1.9, 0.8, -0.4});
    auto g = grad_smooth(f, s, 0, 10.0);
    const double h = 1e-6;
    for (std::size_t ch = 0; ch < s.channel_count(); ++ch) {
      Signal up = s, dn = s;
      up.at(ch, 0) += h;
      dn.at(ch, 0) -= h;
      const double fd = (eval_exact(f, up) - eval_exact(f, dn)) / (2 * h);
      CHECK(g.gradient.at(ch, 0) == doctest::Approx(fd).epsilon(1e-6));
    }
    // Unit-norm gradient along the separation vector.
    double n0 = 0.0;
    for (int j = 0; j < 3; ++j) n0 += g.gradient.at(channel_index(0, j), 0) * g.gradient.at(channel_index(0, j), 0);
    CHECK(n0 == doctest::Approx(1.0));
  }

  TEST_CASE("lone vehicle without targets") {
    MissionSpec s = fixture::corridor();
    s.targets.clear();
    s.vehicles[0].home = fixture::cube(9, 1, 1);
    CompiledMission cm = compile(s);
    REQUIRE(cm.formula->kind == NodeKind::kConjunction);
    REQUIRE(cm.formula->children.size() == 2);
    const auto& safety = cm.formula->children[0];
    CHECK(safety->kind == NodeKind::kAlways);
    CHECK(safety->children[0]->label == "workspace/v0");
    CHECK(cm.formula->children[1]->label == "home/v0");
    CHECK(cm.steps == 40);
  }

  TEST_CASE("one target over two vehicles") {
    MissionSpec s = fixture::corridor();
    s.depots.push_back({"d1", fixture::cube(1, 3, 1)});
    s.vehicles.push_back(fixture::vehicle(1, 1));
    for (auto& v : s.vehicles) v.home = fixture::cube(9, 1, 1);
    CompiledMission cm = compile(s);
    std::size_t eventually = 0;
    for (const auto& c : cm.formula->children) {
      if (c->kind == NodeKind::kEventually && c->label.rfind("target", 0) == 0) {
        ++eventually;
        REQUIRE(c->children[0]->kind == NodeKind::kDisjunction);
        CHECK(c->children[0]->children.size() == 2);
      }
    }
    CHECK(eventually == 1);
  }

  TEST_CASE("node count is closed form") {
    for (std::size_t fleet : {1, 2, 3}) {
      for (std::size_t obs : {0, 1, 2}) {
        for (std::size_t rs : {0, 1, 2}) {
          for (std::size_t tr : {0, 1, 3}) {
            MissionSpec s;
            s.workspace = {{0, 0, 0}, {40, 40, 10}};
            for (std::size_t d = 0; d < fleet; ++d) {
              s.depots.push_back({"d", fixture::cube(1 + 3.0 * d, 1, 1)});
              s.vehicles.push_back(fixture::vehicle(d, 2));
              s.vehicles.back().home = s.depots.back().box;
            }
            for (std::size_t q = 0; q < obs; ++q) s.obstacles.push_back({"o", fixture::cube(20, 5 + 4.0 * q, 2)});
            for (std::size_t q = 0; q < rs; ++q) s.stations.push_back({"s", fixture::cube(30, 5 + 4.0 * q, 2)});
            for (std::size_t q = 0; q < tr; ++q) s.targets.push_back({"t", fixture::cube(10, 5 + 4.0 * q, 2)});
            s.horizon = 10.0;
            s.install_time = 1.0;
            s.refill_time = 1.0;
            CompiledMission cm = compile(s);
            CHECK(node_count(cm.formula) == expected_node_count(s));
          }
        }
      }
    }
  }

  TEST_CASE("symbol table binds each symbol once") {
    MissionSpec s = fixture::corridor();
    s.vehicles[0].home = fixture::cube(9, 1, 1);
    CompiledMission cm = compile(s);
    std::set<std::string> seen;
    for (const auto& b : cm.symbols) CHECK(seen.insert(b.symbol).second);
    for (const char* sym : {"T_N", "T_ins", "T_rs", "Gamma_dis", "epsilon", "ws", "tr,1", "rs,1", "c[0]", "hm[0]"}) {
      CHECK(seen.count(sym) == 1);
    }
  }

  TEST_CASE("compile needs homes and a fixed horizon") {
    MissionSpec s = fixture::corridor();
    CHECK_THROWS_AS(compile(s), ValidationError);
    s.vehicles[0].home = fixture::cube(9, 1, 1);
    s.horizon = 0.0;
    s.horizon_scale = 1.5;
    CHECK_THROWS_AS(compile(s), ValidationError);
  }

  TEST_CASE("handcrafted satisfying trace") {
    MissionSpec s = fixture::corridor();
    s.stations.clear();
    s.vehicles[0].home = fixture::cube(9, 1, 1);
    CompiledMission cm = compile(s);
    const std::size_t n = cm.steps;
    const std::size_t n_ins = install_steps(s);
    Signal sig = fleet_signal(1, n + 1, s.dt);
    for (std::size_t k = 0; k <= n; ++k) {
      if (k < 2) place(sig, 0, k, {1, 1, 1}, 1);
      else if (k <= 2 + n_ins) place(sig, 0, k, {5, 1, 1}, 1);
      else place(sig, 0, k, {9, 1, 1}, 0);
    }
    CHECK(eval_exact(cm.formula, sig) > 0.0);
    // Without the dwell the target clause fails.
    place(sig, 0, 2 + n_ins, {9, 1, 1}, 0);
    CHECK(eval_exact(cm.formula, sig) < 0.0);
  }
}
