#include <doctest.h>

#include <cmath>

#include "weakhyp/expr.hpp"

using namespace weakhyp;

TEST_CASE("grammar examples evaluate") {
  CHECK(parse_coeff_expr("t^2")->eval(3.0) == doctest::Approx(9.0));
  CHECK(derivative(parse_coeff_expr("t^2"))->eval(1.0) == doctest::Approx(2.0));
  CHECK(parse_coeff_expr("abs(t)^0.5")->eval(0.25) == doctest::Approx(0.5));
  CHECK(parse_coeff_expr("1 + sin(t)*t")->eval(0.0) == doctest::Approx(1.0));
  CHECK(parse_coeff_expr("cos(t^2)")->eval(0.0) == doctest::Approx(1.0));
  CHECK(parse_coeff_expr("2*t - 3")->eval(1.0) == doctest::Approx(-1.0));
  CHECK(parse_coeff_expr("(t + 1)^3")->eval(1.0) == doctest::Approx(8.0));
}

TEST_CASE("parse print round trip") {
  for (const char* text : {"t^2", "abs(t)^0.5", "1 + sin(t)*t", "cos(t)*cos(t) - 2*t^3",
                           "3.25*abs(t)^1.5 + (t + 1)^2", "sin(cos(t) + t^2)"}) {
    ExprPtr e = parse_coeff_expr(text);
    const std::string printed = to_string(e);
    ExprPtr again = parse_coeff_expr(printed);
    CHECK(to_string(again) == printed);
    for (double t : {0.1, 0.37, 0.93}) CHECK(again->eval(t) == doctest::Approx(e->eval(t)));
  }
}

TEST_CASE("parse errors carry position") {
  CHECK_THROWS_AS(parse_coeff_expr("t +"), ParseError);
  CHECK_THROWS_AS(parse_coeff_expr("sin(t"), ParseError);
  CHECK_THROWS_AS(parse_coeff_expr("x"), ParseError);
  CHECK_THROWS_AS(parse_coeff_expr("abs(t)^-1"), ParseError);
  CHECK_THROWS_AS(parse_coeff_expr("abs(t)^0"), ParseError);
  CHECK_THROWS_AS(parse_coeff_expr(""), ParseError);
}

TEST_CASE("derivatives match finite differences") {
  const double h = 1e-6;
  for (const char* text : {"t^3", "sin(t)*t", "cos(t^2) + 2*t", "abs(t)^2.5", "(t + 1)^4"}) {
    ExprPtr e = parse_coeff_expr(text);
    ExprPtr de = derivative(e);
    for (double t : {0.2, 0.55, 0.91}) {
      const double fd = (e->eval(t + h) - e->eval(t - h)) / (2.0 * h);
      CHECK(de->eval(t) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("abs power derivative chain") {
  // d/dt |t|^2.5 = 2.5 |t|^1.5 sign(t)
  ExprPtr d = derivative(parse_coeff_expr("abs(t)^2.5"));
  CHECK(d->eval(-0.25) == doctest::Approx(-2.5 * std::pow(0.25, 1.5)));
  CHECK(d->eval(0.0) == doctest::Approx(0.0));  // p > 1: one-sided value 0
  // second derivative of |t|^3 at 0 is 0; third has a jump
  ExprPtr e3 = parse_coeff_expr("abs(t)^3");
  CHECK(derivative(e3, 2)->eval(0.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(derivative(e3, 3)->eval(0.0), SingularPointError);
  // |t| kink: first derivative undefined exactly at 0, fine elsewhere
  ExprPtr e1 = derivative(parse_coeff_expr("abs(t)^1"));
  CHECK(e1->eval(0.5) == doctest::Approx(1.0));
  CHECK(e1->eval(-0.5) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(e1->eval(0.0), SingularPointError);
}

TEST_CASE("derivative of sums and products") {
  // d/dt (t^2 * sin(t)) = 2 t sin(t) + t^2 cos(t)
  ExprPtr d = derivative(parse_coeff_expr("t^2*sin(t)"));
  const double t = 0.7;
  CHECK(d->eval(t) == doctest::Approx(2 * t * std::sin(t) + t * t * std::cos(t)));
  ExprPtr d2 = derivative(parse_coeff_expr("t^3 - 2*t"), 2);
  CHECK(d2->eval(0.5) == doctest::Approx(3.0));
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, 2.675631981679821, 1e-300, -4.43492954861223e-107, 0.0,
                   123456789.123456789}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
