#include <doctest.h>

#include <stdexcept>

#include "stlplan/signal.hpp"

using namespace stlplan;

TEST_SUITE("signal") {
  TEST_CASE("layout and lookup") {
    Signal s(0.5, {"x", "y"}, 3);
    CHECK(s.dt() == 0.5);
    CHECK(s.length() == 3);
    CHECK(s.channel_count() == 2);
    CHECK(s.index_of("y") == 1);
    CHECK(s.has_channel("x"));
    CHECK_FALSE(s.has_channel("z"));
    CHECK_THROWS_AS(s.index_of("z"), std::out_of_range);
    s.at(1, 2) = 4.0;
    CHECK(s.channel(1)[2] == 4.0);
    CHECK(s.samples()[5] == 4.0);
    Signal z = s.zeros_like();
    CHECK(z.at(1, 2) == 0.0);
    CHECK(z.channel_names() == s.channel_names());
  }

  TEST_CASE("rejects invalid construction") {
    CHECK_THROWS(Signal(0.0, {"x"}, 2));
    CHECK_THROWS(Signal(1.0, {"x"}, 0));
    CHECK_THROWS(Signal(1.0, {"x", "x"}, 2));
  }
}
