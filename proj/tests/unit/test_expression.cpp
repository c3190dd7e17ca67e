#include <cmath>

#include "doctest.h"
#include "rplap/errors.hpp"
#include "rplap/expression.hpp"

using namespace rplap;
using doctest::Approx;

TEST_CASE("arithmetic and precedence") {
  CHECK(Expression::parse("1 + 2*3", "r")(0.0) == 7.0);
  CHECK(Expression::parse("(1 + 2)*3", "r")(0.0) == 9.0);
  CHECK(Expression::parse("2^3^2", "r")(0.0) == 512.0);
  CHECK(Expression::parse("-r^2", "r")(3.0) == -9.0);
  CHECK(Expression::parse("1e-3 * r", "r")(2.0) == Approx(2e-3));
  CHECK(Expression::parse("8/4/2", "r")(0.0) == 1.0);
}

TEST_CASE("functions and constants") {
  CHECK(Expression::parse("sinh(r)", "r")(1.0) == Approx(std::sinh(1.0)));
  CHECK(Expression::parse("cosh(r) - sin(r) + cos(r)", "r")(0.3) ==
        Approx(std::cosh(0.3) - std::sin(0.3) + std::cos(0.3)));
  CHECK(Expression::parse("exp(s)", "s")(0.5) == Approx(std::exp(0.5)));
  CHECK(Expression::parse("pow(1 + s, 3)", "s")(1.0) == Approx(8.0));
  CHECK(Expression::parse("sin(pi*r)", "r")(0.5) == Approx(1.0));
}

TEST_CASE("malformed input is a config error") {
  CHECK_THROWS_AS(Expression::parse("1 +", "r"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("foo(r)", "r"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("s", "r"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("(r", "r"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("r r", "r"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("", "r"), ConfigError);
}
