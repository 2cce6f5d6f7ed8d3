#include <doctest.h>

#include <random>

#include "stlplan/lp.hpp"

using namespace stlplan;
using lp::Sense;

TEST_SUITE("lp") {
  TEST_CASE("textbook maximum") {
    // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
    lp::Problem p;
    p.add_variable(-3, 0, lp::kInf);
    p.add_variable(-5, 0, lp::kInf);
    p.rows.push_back({{{0, 1}}, Sense::kLessEqual, 4, "a"});
    p.rows.push_back({{{1, 2}}, Sense::kLessEqual, 12, "b"});
    p.rows.push_back({{{0, 3}, {1, 2}}, Sense::kLessEqual, 18, "c"});
    auto r = lp::solve(p);
    REQUIRE(r.status == lp::Status::kOptimal);
    CHECK(r.objective == doctest::Approx(-36));
    CHECK(r.x[0] == doctest::Approx(2));
    CHECK(r.x[1] == doctest::Approx(6));
  }

  TEST_CASE("equalities, >= rows and upper bounds") {
    // min x + 2y + 3z s.t. x + y + z = 2, y + z >= 1, x <= 1.5, z <= 1
    lp::Problem p;
    p.add_variable(1, 0, 1.5);
    p.add_variable(2, 0, lp::kInf);
    p.add_variable(3, 0, 1);
    p.rows.push_back({{{0, 1}, {1, 1}, {2, 1}}, Sense::kEqual, 2, "sum"});
    p.rows.push_back({{{1, 1}, {2, 1}}, Sense::kGreaterEqual, 1, "cover"});
    auto r = lp::solve(p);
    REQUIRE(r.status == lp::Status::kOptimal);
    CHECK(r.objective == doctest::Approx(3.0));
    CHECK(r.x[0] == doctest::Approx(1.0));
    CHECK(r.x[1] == doctest::Approx(1.0));
  }

  TEST_CASE("fixed variables are substituted") {
    lp::Problem p;
    p.add_variable(1, 2, 2);
    p.add_variable(1, 0, 5);
    p.rows.push_back({{{0, 1}, {1, 1}}, Sense::kGreaterEqual, 3, "r"});
    auto r = lp::solve(p);
    REQUIRE(r.status == lp::Status::kOptimal);
    CHECK(r.x[0] == 2.0);
    CHECK(r.objective == doctest::Approx(3.0));
  }

  TEST_CASE("infeasible reports the offending rows") {
    lp::Problem p;
    p.add_variable(1, 0, 1);
    p.rows.push_back({{{0, 1}}, Sense::kGreaterEqual, 2, "too-high"});
    auto r = lp::solve(p);
    CHECK(r.status == lp::Status::kInfeasible);
    REQUIRE(r.infeasible_rows.size() == 1);
    CHECK(p.rows[r.infeasible_rows[0]].family == "too-high");
    CHECK(std::string(lp::to_string(r.status)) == "infeasible");
  }

  TEST_CASE("unbounded") {
    lp::Problem p;
    p.add_variable(-1, 0, lp::kInf);
    p.add_variable(0, 0, lp::kInf);
    p.rows.push_back({{{0, 1}, {1, -1}}, Sense::kLessEqual, 1, "r"});
    CHECK(lp::solve(p).status == lp::Status::kUnbounded);
  }

  TEST_CASE("random boxes against vertex enumeration") {
    // min c.x over [0,u]^2 with one row a.x <= b: optimum sits on a vertex
    // of the box clipped by the row; enumerate candidates directly.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-3, 3), P(0.5, 4);
    for (int it = 0; it < 300; ++it) {
      const double c0 = U(rng), c1 = U(rng), a0 = U(rng), a1 = U(rng), b = P(rng), u0 = P(rng), u1 = P(rng);
      lp::Problem p;
      p.add_variable(c0, 0, u0);
      p.add_variable(c1, 0, u1);
      p.rows.push_back({{{0, a0}, {1, a1}}, Sense::kLessEqual, b, "r"});
      auto r = lp::solve(p);
      REQUIRE(r.status == lp::Status::kOptimal);
      std::vector<std::pair<double, double>> cand{{0, 0}, {u0, 0}, {0, u1}, {u0, u1}};
      if (a0 != 0) {
        cand.push_back({b / a0, 0});
        cand.push_back({(b - a1 * u1) / a0, u1});
      }
      if (a1 != 0) {
        cand.push_back({0, b / a1});
        cand.push_back({u0, (b - a0 * u0) / a1});
      }
      double best = 1e300;
      for (auto [x, y] : cand) {
        if (x < -1e-12 || y < -1e-12 || x > u0 + 1e-12 || y > u1 + 1e-12 || a0 * x + a1 * y > b + 1e-12) continue;
        best = std::min(best, c0 * x + c1 * y);
      }
      CHECK(r.objective == doctest::Approx(best).epsilon(1e-9));
    }
  }
}
