#include <doctest.h>

#include "bbe/expr.hpp"

using namespace bbe;

TEST_CASE("payoff expressions evaluate at known points") {
  CHECK(parseExpr("s1*(1-s1-s2)")(1.0 / 3, 1.0 / 3) == doctest::Approx(1.0 / 9).epsilon(1e-15));
  CHECK(parseExpr("(1-s1)*(s1+s2-1)")(0.75, 0.75) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(parseExpr("s1*s2 - s1^2/(2*0.9)")(0.9, 0.9) == doctest::Approx(0.36).epsilon(1e-14));

  const Params tm{{"t", 1.0}, {"M", 3.0}};
  const Expr hot = parseExpr("s1*min(1, max(0, (s2-s1+t)/(2*t)))", tm);
  CHECK(hot(1, 1) == doctest::Approx(0.5));
  CHECK(hot(2.5, 0) == 0.0);  // priced out of the market
  CHECK(hot(0.2, 3) == doctest::Approx(0.2));
}

TEST_CASE("constants fold and parameters bind at parse time") {
  const Expr zero = parseExpr("0");
  CHECK(zero.isConstant());
  CHECK(zero(0.3, 0.7) == 0.0);
  const Expr e = parseExpr("rho*2 + s2", {{"rho", 0.25}});
  CHECK_FALSE(e.dependsOn(1));
  CHECK(e.dependsOn(2));
  CHECK(e(9, 1) == doctest::Approx(1.5));
}

TEST_CASE("precedence: power binds tighter than product, product than sum") {
  CHECK(parseExpr("2+3*2^2")(0, 0) == 14.0);
  CHECK(parseExpr("(2+3)*2")(0, 0) == 10.0);
  CHECK(parseExpr("-s1^2")(3, 0) == -9.0);
  CHECK(parseExpr("8/2/2")(0, 0) == 2.0);
  CHECK(parseExpr("2^3^2")(0, 0) == 512.0);  // right associative
}

TEST_CASE("piecewise blocks select the matching branch") {
  const Expr e = parseExpr("piecewise{s1 < 0.5: 1, s1 >= 0.5: s2}");
  CHECK(e(0.2, 7) == 1.0);
  CHECK(e(0.5, 7) == 7.0);
  CHECK_THROWS_AS(parseExpr("piecewise{s1 < 0.5: 1, s1 > 0.5: 2}"), ParseError);   // gap at 0.5
  CHECK_THROWS_AS(parseExpr("piecewise{s1 <= 0.5: 1, s1 >= 0.5: 2}"), ParseError); // overlap
  CHECK_THROWS_AS(parseExpr("piecewise{s1 < 0.5: 1, s2 >= 0.5: 2}"), ParseError);
  CHECK_THROWS_AS(parseExpr("piecewise{s1 < s2: 1, s1 >= 0.5: 2}"), ParseError);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parseExpr("s1 *\n  (s2 + )");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 9);
  }
  try {
    parseExpr("s1 + q");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("unknown identifier 'q'") != std::string::npos);
    CHECK(e.column() == 6);
  }
  CHECK_THROWS_AS(parseExpr(""), ParseError);
  CHECK_THROWS_AS(parseExpr("s1 s2"), ParseError);
  CHECK_THROWS_AS(parseExpr("min(s1)"), ParseError);
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(parseExpr("1/(s1-s2)")(0.5, 0.5), EvalError);
  CHECK_THROWS_AS(parseExpr("sqrt(s1-1)")(0.5, 0), EvalError);
  CHECK_THROWS_AS(parseExpr("(s1-1)^0.5")(0.5, 0), EvalError);
  CHECK_THROWS_AS(parseExpr("1/0"), std::exception);  // folded at parse time
  CHECK(evalExpr(parseExpr("s1/s2"), 1, 4) == 0.25);
}

TEST_CASE("print then parse is a fixed point on the corpus") {
  const Params p{{"t", 1.0}, {"M", 3.0}, {"rho", 0.9}, {"g1", 0.4}, {"l1", 0.3}, {"p", 0.5}};
  const char* corpus[] = {
      "s1*(1-s1-s2)",
      "s2*(1-s1-s2)",
      "(1-s1)*(s1+s2-1)",
      "(1-s2)*(s1+s2-1)",
      "s1*min(1, max(0, (s2-s1+t)/(2*t)))",
      "s2*min(1, max(0, (s1-s2+t)/(2*t)))",
      "s1*s2 - s1^2/(2*rho)",
      "s1*s2 - s2^2/(2*rho)",
      "s1*s2*4 + s1*(1-s2)*(-1) + (1-s1)*s2*2 + (1-s1)*(1-s2)*1",
      "s1*s2 + s1*(1-s2)*(-l1) + (1-s1)*s2*g1",
      "piecewise{s2 < 1: (s2+t)/2, s2 >= 1: 1}",
      "piecewise{s1 <= 0.5: s1^2, s1 > 0.5: 0.25}",
      "sqrt(s1*s2)",
      "-s1 + -(-s2)",
      "s1^2^2",
      "(s1-s2)^2",
      "max(s1, s2) - min(s1, s2)",
      "1e-3*s1 + 2.5E2*s2",
      "p*s1*(1-s1-s2) + (1-p)*s1*(1-s1-1/3)",
      "s1/(1+s2)/2",
      "0",
      "-(s1)",
      "s1 - (s2 - 1)",
      "s1 / (s2 * 2)",
  };
  for (const char* src : corpus) {
    CAPTURE(src);
    const Expr a = parseExpr(src, p);
    const Expr b = parseExpr(a.print());
    CHECK(a == b);
    CHECK(b.print() == a.print());
    for (double s1 : {0.1, 0.45, 0.9})
      for (double s2 : {0.2, 0.6, 0.95}) CHECK(b(s1, s2) == a(s1, s2));
  }
}

TEST_CASE("affine substitution rescales one variable") {
  const Expr e = parseExpr("s1*(1-s1-s2)");
  const Expr f = e.affineSubstitute(1, -1.0, 1.0);  // s1 -> 1 - u
  CHECK(f(0.25, 0.1) == doctest::Approx(e(0.75, 0.1)));
}

TEST_CASE("formatNumber round-trips") {
  for (double v : {0.1, 1.0 / 3, 1e-17, 123456789.0, -2.5}) CHECK(std::stod(formatNumber(v)) == v);
  CHECK(formatNumber(0.5) == "0.5");
}
