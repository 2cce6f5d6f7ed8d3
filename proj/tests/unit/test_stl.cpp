#include <doctest.h>

#include <cmath>
#include <random>

#include "random_stl.hpp"
#include "stlplan/stl.hpp"

using namespace stlplan;

namespace {

Signal line(std::vector<double> xs) {
  Signal s(1.0, {"x"}, xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) s.at(0, k) = xs[k];
  return s;
}

Formula x_ge(const Signal& s, double c) { return make_predicate(AffinePredicate{{{{"x", s.index_of("x")}, 1.0}}, -c}); }

}  // namespace

TEST_SUITE("stl") {
  TEST_CASE("exact semantics") {
    Signal one = line({5});
    CHECK(eval_exact(x_ge(one, 3), one) == doctest::Approx(2.0));
    Signal s = line({1, 2, -1});
    CHECK(eval_exact(make_always({0, 2}, x_ge(s, 0)), s) == -1.0);
    Signal e = line({-3, -1, 0.5});
    CHECK(eval_exact(make_eventually({0, 2}, x_ge(e, 0)), e) == 0.5);
    CHECK(eval_exact(make_implies(x_ge(s, 0), x_ge(s, 5)), s) == -1.0);
    CHECK(eval_exact(make_after(2, x_ge(s, 0)), s) == -1.0);
    CHECK(eval_exact(make_not(x_ge(s, 0)), s, 2) == 1.0);
  }

  TEST_CASE("smooth closed forms") {
    const std::vector<double> v{1.0, 2.0};
    CHECK(softmin(v, 10.0) == doctest::Approx(1.0 - std::log1p(std::exp(-10.0)) / 10.0).epsilon(1e-12));
    CHECK(softmin(v, 10.0) == doctest::Approx(0.9999955).epsilon(1e-7));
    const std::vector<double> eq(5, 3.0);
    CHECK(softmin(eq, 2.0) == doctest::Approx(3.0 - std::log(5.0) / 2.0));
    CHECK(softmax(eq, 2.0) == doctest::Approx(3.0 + std::log(5.0) / 2.0));
    Signal s = line({1, 1});
    CHECK(eval_smooth(make_eventually({0, 1}, x_ge(s, 0)), s, 0, 1.0) == doctest::Approx(1.0 + std::log(2.0)));
  }

  TEST_CASE("shifted evaluation does not overflow") {
    const std::vector<double> big{1000.0, 1001.0};
    CHECK(std::isfinite(softmin(big, 50.0)));
    CHECK(std::isfinite(softmax(big, 50.0)));
    CHECK(softmax(big, 50.0) == doctest::Approx(1001.0).epsilon(1e-9));
  }

  TEST_CASE("gradient examples") {
    Signal one = line({5});
    auto g = grad_smooth(x_ge(one, 3), one, 0, 10.0);
    CHECK(g.value == 2.0);
    CHECK(g.gradient.at(0, 0) == 1.0);
    Signal s = line({2, 2, 7});
    auto h = grad_smooth(make_always({0, 1}, x_ge(s, 0)), s, 0, 10.0);
    CHECK(h.gradient.at(0, 0) == doctest::Approx(0.5));
    CHECK(h.gradient.at(0, 1) == doctest::Approx(0.5));
    CHECK(h.gradient.at(0, 2) == 0.0);
  }

  TEST_CASE("horizon") {
    Signal s = line({0});
    CHECK(horizon(x_ge(s, 0)) == 0);
    CHECK(horizon(make_always({0, 5}, x_ge(s, 0))) == 5);
    CHECK(horizon(make_after(4, make_always({0, 3}, x_ge(s, 0)))) == 7);
  }

  TEST_CASE("horizon overflow names the node") {
    Signal s = line({1, 2});
    Formula f = make_always({0, 3}, x_ge(s, 0), "slow");
    CHECK_THROWS_AS(eval_exact(f, s), HorizonError);
    try {
      eval_exact(f, s);
    } catch (const HorizonError& e) {
      CHECK(e.required_length() == 4);
      CHECK(e.actual_length() == 2);
      CHECK(e.node().find("slow") != std::string::npos);
    }
  }

  TEST_CASE("structural invariants") {
    Signal s = line({0});
    CHECK_THROWS(make_not(make_and({x_ge(s, 0)})));
    CHECK_THROWS(make_always({3, 1}, x_ge(s, 0)));
    CHECK_THROWS(make_and({}));
    CHECK_THROWS(eval_smooth(x_ge(s, 0), s, 0, 0.0));
    Formula bad = make_predicate(AffinePredicate{{{{"y", 0}, 1.0}}, 0.0});
    CHECK_THROWS(eval_exact(bad, s));
  }

  TEST_CASE("json text is canonical") {
    Signal s = line({0});
    Formula f = make_always({0, 2}, make_and({x_ge(s, 1), x_ge(s, 2)}), "box");
    const std::string a = to_json_text(f);
    CHECK(a == to_json_text(make_always({0, 2}, make_and({x_ge(s, 1), x_ge(s, 2)}), "box")));
    CHECK(a.find("\"always\"") != std::string::npos);
    CHECK(node_count(f) == 4);
  }

  TEST_CASE("random formulas agree with the reference evaluator") {
    std::mt19937_64 rng(7);
    oracle::StlGen gen;
    gen.allow_indicator = true;
    for (int i = 0; i < 200; ++i) {
      Signal s = oracle::random_signal(rng, 3, 12);
      Formula f = oracle::random_formula(rng, s, gen, 0, 11);
      REQUIRE(horizon(f) <= 11);
      CHECK(eval_exact(f, s) == oracle::evaluate(f, s, 0, 0.0));
      for (double beta : {1.0, 10.0, 50.0}) {
        const double ref = oracle::evaluate(f, s, 0, beta);
        CHECK(eval_smooth(f, s, 0, beta) == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
      }
    }
  }

  TEST_CASE("monotone convergence on single-kind aggregations and sign soundness") {
    // With mixed min/max nesting the errors of the two kinds can cancel at
    // small beta, so convergence is only monotone when every aggregation
    // has the same kind.
    std::mt19937_64 rng(11);
    oracle::StlGen gen;
    for (int i = 0; i < 200; ++i) {
      Signal s = oracle::random_signal(rng, 3, 10);
      std::vector<Formula> kids;
      for (int j = 0; j < 3; ++j) kids.push_back(oracle::random_predicate(rng, s, gen));
      const bool as_min = i % 2 == 0;
      Formula f = as_min ? make_always({0, 4}, make_and({make_after(1, make_and(kids)), kids[0]}))
                         : make_eventually({0, 4}, make_or({make_after(1, make_or(kids)), kids[0]}));
      const double exact = eval_exact(f, s);
      double prev = std::abs(eval_smooth(f, s, 0, 1.0) - exact);
      for (double beta : {2.0, 5.0, 10.0, 50.0}) {
        const double err = std::abs(eval_smooth(f, s, 0, beta) - exact);
        CHECK(err <= prev + 1e-12);
        prev = err;
      }
      if (as_min) {
        // Strict in exact arithmetic; a dominant minimum can round the gap away.
        CHECK(eval_smooth(f, s, 0, 10.0) <= exact);
      }
    }
  }

  TEST_CASE("conjunction sign soundness is strict on close values") {
    Signal s = line({0.3, 0.35, 0.32});
    Formula conj = make_always({0, 2}, x_ge(s, 0));
    CHECK(eval_smooth(conj, s, 0, 10.0) < eval_exact(conj, s));
  }

  TEST_CASE("clause breakdown reports labelled nodes in context") {
    Signal s = line({3, 1, 4});
    Formula inner = with_label(x_ge(s, 2), "above2");
    Formula f = make_and({make_always({0, 2}, inner), with_label(x_ge(s, 0), "pos")}, "root");
    auto cl = clause_breakdown(f, s);
    REQUIRE(cl.size() == 3);
    CHECK(cl[0].label == "root");
    CHECK(cl[0].value == -1.0);
    CHECK(cl[1].label == "above2");
    CHECK(cl[1].value == -1.0);
    CHECK(cl[2].label == "pos");
    CHECK(cl[2].value == 3.0);
  }

  TEST_CASE("evaluation is bit-deterministic") {
    std::mt19937_64 rng(3);
    Signal s = oracle::random_signal(rng, 3, 10);
    Formula f = oracle::random_formula(rng, s, {}, 0, 9);
    const auto a = grad_smooth(f, s, 0, 10.0);
    const auto b = grad_smooth(f, s, 0, 10.0);
    CHECK(a.value == b.value);
    CHECK(std::equal(a.gradient.samples().begin(), a.gradient.samples().end(), b.gradient.samples().begin()));
  }
}
