#include <doctest.h>

#include "bsq/errors.hpp"
#include "bsq/expr.hpp"
#include "bsq/potential.hpp"

#include <cmath>

using namespace bsq;

TEST_SUITE("potential_dsl")
{
    TEST_CASE("parse polynomial potentials")
    {
        const Potential p = parse_potential("x^2");
        CHECK(p(2.0) == 4.0);
        for (double x : {-3.0, 0.0, 0.7, 11.0})
            CHECK(p.eval(2, x) == 2.0);

        const Potential q = parse_potential("x^2 + 0.25*x^4");
        CHECK(q.eval(1, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
    }

    TEST_CASE("missing exponent reports offset 2")
    {
        try {
            parse_expression("x^");
            FAIL("no error");
        } catch (const ParseError& e) {
            CHECK(e.offset() == 2);
            CHECK(e.message() == "expected exponent");
        }
    }

    TEST_CASE("syntax errors carry offsets")
    {
        struct Case { const char* text; std::size_t offset; };
        for (const Case c : {Case{"2x", 1}, Case{"x +", 3}, Case{"(x", 2}, Case{"tan(x)", 0}, Case{"y", 0},
                             Case{"x ** 2", 3}, Case{"sin x", 4}, Case{"", 0}, Case{"x)", 1}}) {
            CAPTURE(c.text);
            try {
                parse_expression(c.text);
                FAIL("no error");
            } catch (const ParseError& e) {
                CHECK(e.offset() == c.offset);
            }
        }
    }

    TEST_CASE("unknown function names are distinguished")
    {
        try {
            parse_expression("tan(x)");
        } catch (const ParseError& e) {
            CHECK(e.message().find("tan") != std::string::npos);
        }
    }

    TEST_CASE("derivative stack")
    {
        const Potential p = parse_potential("x^4");
        const Derivs d = eval_derivs(p, 1.0);
        CHECK(d.v == 1.0);
        CHECK(d.d1 == 4.0);
        CHECK(d.d2 == 12.0);
        CHECK(d.d3 == 24.0);
        CHECK(d.d4 == 24.0);

        const Derivs z = eval_derivs(parse_potential("x^2"), 0.0);
        CHECK(z.v == 0.0);
        CHECK(z.d1 == 0.0);
        CHECK(z.d2 == 2.0);
        CHECK(z.d3 == 0.0);
        CHECK(z.d4 == 0.0);

        CHECK(parse_potential("exp(-x)*(exp(-x) - 2)")(0.0) == -1.0);
    }

    TEST_CASE("domain errors")
    {
        CHECK_THROWS_AS(parse_expression("log(x)").eval(-1.0), DomainError);
        CHECK_THROWS_AS(parse_expression("sqrt(x)").eval(-0.5), DomainError);
        CHECK_THROWS_AS(parse_expression("1/x").eval(0.0), DomainError);
        CHECK_THROWS_AS(parse_expression("x^(1/2)").eval(-2.0), DomainError);
        CHECK(parse_expression("x^(1/3)").eval(-8.0) == doctest::Approx(-2.0));
    }

    TEST_CASE("general powers become exp(g log f)")
    {
        const Expr e = parse_expression("x^x");
        CHECK(e.eval(2.0) == doctest::Approx(4.0).epsilon(1e-14));
        CHECK_THROWS_AS(e.eval(-1.0), DomainError);
        const Expr d = derivative(e);
        CHECK(d.eval(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    }

    TEST_CASE("functions and their derivatives")
    {
        const Expr e = parse_expression("sin(x) + cos(2*x) + tanh(x) + sqrt(1 + x^2) + log(2 + x) + exp(x/3)");
        const double x = 0.37;
        const double want = std::cos(x) - 2 * std::sin(2 * x) + 1 - std::pow(std::tanh(x), 2) + x / std::sqrt(1 + x * x) +
                            1 / (2 + x) + std::exp(x / 3) / 3;
        CHECK(derivative(e).eval(x) == doctest::Approx(want).epsilon(1e-14));
    }

    TEST_CASE("printer output parses back")
    {
        for (const char* s : {"x^2 + 0.25*x^4", "-x", "1 - x", "x^(-2)", "x^(1/3)", "2^x", "-(x + 1)^3",
                              "exp(-x)*(exp(-x) - 2)", "1/(1 + x^2)", "-3.5e-7*x"}) {
            CAPTURE(s);
            const Expr a = parse_expression(s);
            const Expr b = parse_expression(to_string(a));
            CHECK(structurally_equal(a, b));
        }
    }

    TEST_CASE("constant folding and identities")
    {
        CHECK(parse_expression("2*3 + 1").is_constant(7.0));
        CHECK(to_string(parse_expression("0*x + 1*x")) == "x");
        CHECK(derivative(parse_expression("5")).is_constant(0.0));
        CHECK(derivative(derivative(derivative(parse_expression("x^2")))).is_constant(0.0));
    }

    TEST_CASE("complex evaluation continues the real one")
    {
        const Expr e = parse_expression("x^2 + 0.1*x^4 + sin(x)");
        const std::complex<double> z(0.4, 0.0);
        CHECK(std::abs(e.eval(z) - e.eval(0.4)) < 1e-15);
        const std::complex<double> w(0.3, 0.2);
        const std::complex<double> want = w * w + 0.1 * w * w * w * w + std::sin(w);
        CHECK(std::abs(e.eval(w) - want) < 1e-15);
    }

    TEST_CASE("potential keeps the hint")
    {
        const Potential p = parse_potential("x^2", Interval{-2, 3});
        REQUIRE(p.hint().has_value());
        CHECK(p.hint()->hi == 3.0);
        CHECK(p.source() == "x^2");
    }
}
