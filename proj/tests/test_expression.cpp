#include <cmath>
#include <numbers>

#include "doctest.h"
#include "bsnet/expression.hpp"
#include "bsnet/special_fn.hpp"

using namespace bsnet;

namespace {

double eval1(const char* text, double S = 0.0, double t = 0.0) {
    const double vars[] = {S, t};
    return Expression::parse(text, {"S", "t"}).eval(std::span<const double>(vars));
}

} // namespace

TEST_CASE("precedence and associativity") {
    CHECK(eval1("1 + 2 * 3") == 7.0);
    CHECK(eval1("(1 + 2) * 3") == 9.0);
    CHECK(eval1("2 ^ 3 ^ 2") == 512.0);
    CHECK(eval1("-2 ^ 2") == -4.0);
    CHECK(eval1("2 ^ -1") == 0.5);
    CHECK(eval1("8 / 4 / 2") == 1.0);
    CHECK(eval1("1 - 2 - 3") == -4.0);
    CHECK(eval1("1.5e2 + .5") == 150.5);
}

TEST_CASE("variables, functions and constants") {
    CHECK(eval1("S * t", 3.0, 4.0) == 12.0);
    CHECK(eval1("pi") == doctest::Approx(std::numbers::pi));
    CHECK(eval1("exp(log(S))", 2.5) == doctest::Approx(2.5));
    CHECK(eval1("sqrt(S) + abs(-t)", 9.0, 2.0) == 5.0);
    CHECK(eval1("max(S, t) - min(S, t)", 1.0, 4.0) == 3.0);
    CHECK(eval1("pow(S, 3)", 2.0) == 8.0);
    CHECK(eval1("sin(0) + cos(0)") == 1.0);
    CHECK(eval1("ncdf(0.35)") == doctest::Approx(special::normal_cdf(0.35)));
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(Expression::parse("", {"S"}), ParseError);
    CHECK_THROWS_AS(Expression::parse("S +", {"S"}), ParseError);
    CHECK_THROWS_AS(Expression::parse("(S", {"S"}), ParseError);
    CHECK_THROWS_AS(Expression::parse("foo(S)", {"S"}), ParseError);
    CHECK_THROWS_AS(Expression::parse("x", {"S"}), ParseError);
    CHECK_THROWS_AS(Expression::parse("max(S)", {"S"}), ParseError);
    CHECK_THROWS_AS(Expression::parse("S S", {"S"}), ParseError);
}

TEST_CASE("jet evaluation gives exact derivatives") {
    const Expression e = Expression::parse("S^2 * (1 - S) + exp(2*S) / (1 + S)", {"S"});
    const double s = 0.4;
    const Jet2 vars[] = {Jet2::variable(s)};
    const Jet2 j = e.eval(std::span<const Jet2>(vars));
    auto f = [](double x) { return x * x * (1 - x) + std::exp(2 * x) / (1 + x); };
    const double h = 1e-4;
    CHECK(j.v == doctest::Approx(f(s)).epsilon(1e-15));
    CHECK(j.d1 == doctest::Approx((f(s + h) - f(s - h)) / (2 * h)).epsilon(1e-7));
    CHECK(j.d2 == doctest::Approx((f(s + h) - 2 * f(s) + f(s - h)) / (h * h)).epsilon(1e-5));

    const Expression n = Expression::parse("ncdf(S)", {"S"});
    const Jet2 jn = n.eval(std::span<const Jet2>(vars));
    const double pdf = std::exp(-0.5 * s * s) / std::sqrt(2 * std::numbers::pi);
    CHECK(jn.d1 == doctest::Approx(pdf).epsilon(1e-14));
    CHECK(jn.d2 == doctest::Approx(-s * pdf).epsilon(1e-14));
}

TEST_CASE("jet arithmetic") {
    const Jet2 x = Jet2::variable(2.0);
    const Jet2 q = Jet2(1.0) / x;
    CHECK(q.v == 0.5);
    CHECK(q.d1 == doctest::Approx(-0.25));
    CHECK(q.d2 == doctest::Approx(0.25));
    const Jet2 p = pow(x, 3.0);
    CHECK(p.d1 == doctest::Approx(12.0));
    CHECK(p.d2 == doctest::Approx(12.0));
    const Jet2 pp = pow(x, x);
    CHECK(pp.v == doctest::Approx(4.0));
    CHECK(pp.d1 == doctest::Approx(4.0 * (std::log(2.0) + 1.0)));
    CHECK(max(x, Jet2(1.0)).d1 == 1.0);
    CHECK(max(Jet2(1.0), Jet2::variable(1.0)).d1 == 0.0);
}
