#include <doctest.h>

#include "../oracles/oracles.hpp"

#include "bsq/action.hpp"
#include "bsq/errors.hpp"

#include <cmath>
#include <numbers>

using namespace bsq;
using std::numbers::pi;

TEST_SUITE("action_integrals")
{
    TEST_CASE("quadrature examples")
    {
        CHECK(quad_well([](double x) { return 1 / std::sqrt(1 - x * x); }, -1, 1, true).value ==
              doctest::Approx(pi).epsilon(1e-13));
        CHECK(quad_well([](double x) { return std::sqrt(1 - x * x); }, -1, 1, false).value ==
              doctest::Approx(pi / 2).epsilon(1e-12));
        const double lem = quad_well([](double x) { return 1 / std::sqrt(1 - x * x * x * x); }, -1, 1, true).value;
        CHECK(lem == doctest::Approx(oracle::lemniscatic()).epsilon(1e-12));
        CHECK(lem == doctest::Approx(2.62206).epsilon(1e-6));
    }

    TEST_CASE("non-finite integrand is a numeric error")
    {
        CHECK_THROWS_AS(integrate<double>([](double) { return std::nan(""); }, 0, 1), NumericError);
    }

    TEST_CASE("action, period and J for power wells")
    {
        for (int m : {1, 2, 3}) {
            const Potential p = parse_potential("x^" + std::to_string(2 * m));
            for (double E : {0.3, 1.0, 2.5}) {
                CAPTURE(m);
                CAPTURE(E);
                const ActionData a = action_data(p, E);
                CHECK(a.S0 == doctest::Approx(oracle::s0_power(m, E)).epsilon(1e-11));
                CHECK(a.J == doctest::Approx(oracle::j_power(m, E)).epsilon(1e-10));
                CHECK(std::abs(a.S2 - oracle::s2_power(m, E)) <= 1e-7 * std::max(1.0, oracle::s2_power(m, E)));
            }
        }
        const ActionData h = action_data(parse_potential("x^2"), 0.7);
        CHECK(h.S0 == doctest::Approx(pi * 0.7).epsilon(1e-13));
        CHECK(h.T == doctest::Approx(pi).epsilon(1e-13));
        CHECK(h.J == doctest::Approx(2 * pi).epsilon(1e-13));
        CHECK(std::abs(h.S2) < 1e-9);

        const ActionData q = action_data(parse_potential("x^4"), 1.0);
        CHECK(q.S0 == doctest::Approx(std::tgamma(0.25) * std::tgamma(1.5) / std::tgamma(1.75)).epsilon(1e-12));
        CHECK(q.T == doctest::Approx(0.75 * q.S0).epsilon(1e-12));
        CHECK(q.J == doctest::Approx(14.378).epsilon(1e-4));
        CHECK(q.S2 == doctest::Approx(0.29954).epsilon(1e-4));
    }

    TEST_CASE("S0 vanishes at the well bottom")
    {
        const Potential p = parse_potential("x^2 + 0.5*x^4");
        double prev = 1.0;
        for (double E : {1e-2, 1e-4, 1e-6, 1e-8}) {
            const double s = action_data(p, E).S0;
            CHECK(s < prev);
            prev = s;
        }
        CHECK(prev < 1e-7);
    }

    TEST_CASE("scaling exponent of S0 for homogeneous wells")
    {
        for (int m : {1, 2}) {
            const Potential p = parse_potential("x^" + std::to_string(2 * m));
            const double e1 = 0.5;
            const double e2 = 2.0;
            const double slope = std::log(action_data(p, e2).S0 / action_data(p, e1).S0) / std::log(e2 / e1);
            CHECK(slope == doctest::Approx((m + 1.0) / (2.0 * m)).epsilon(1e-6));
        }
    }

    TEST_CASE("J agrees with a Hamilton flow integration")
    {
        struct Case
        {
            const char* text;
            oracle::Flow flow;
        };
        const Case cases[] = {
            {"x^4", {[](double x) { return 4 * x * x * x; }, [](double x) { return 12 * x * x; }}},
            {"x^2 + 0.5*x^4",
             {[](double x) { return 2 * x + 2 * x * x * x; }, [](double x) { return 2 + 6 * x * x; }}},
            {"x^2 - 0.3*x^3 + 0.2*x^4",
             {[](double x) { return 2 * x - 0.9 * x * x + 0.8 * x * x * x; },
              [](double x) { return 2 - 1.8 * x + 2.4 * x * x; }}},
        };
        for (const Case& c : cases) {
            const Potential p = parse_potential(c.text);
            for (double E : {0.5, 1.5}) {
                CAPTURE(c.text);
                const oracle::LoopIntegrals o = oracle::hamilton_loop(c.flow, 0.0, std::sqrt(E - p(0.0)), 2e-4);
                const ActionData a = action_data(p, E);
                CHECK(std::abs(a.T - o.period) <= 1e-6 * o.period);
                CHECK(std::abs(a.J - o.j) <= 1e-6 * std::abs(o.j));
            }
        }
    }

    TEST_CASE("period equals dS0/dE")
    {
        for (const char* text : {"x^4", "x^2 + 0.5*x^4", "x^2 - 0.3*x^3 + 0.2*x^4"}) {
            const Potential p = parse_potential(text);
            for (int i = 0; i < 10; ++i) {
                const double E = 0.2 + 0.25 * i;
                const double d = 1e-3 * E;
                const double ds = (-action_data(p, E + 2 * d).S0 + 8 * action_data(p, E + d).S0 -
                                   8 * action_data(p, E - d).S0 + action_data(p, E - 2 * d).S0) /
                                  (12 * d);
                const double T = action_data(p, E).T;
                CHECK(std::abs(T - ds) <= 1e-6 * T);
            }
        }
    }

    TEST_CASE("T1 integrand")
    {
        const Potential p = parse_potential("x^2");
        CHECK(t1_integrand(p, 1.0, 1 / std::sqrt(2.0)) == doctest::Approx(1 / (2 * std::sqrt(2.0))).epsilon(1e-14));
        CHECK_THROWS_AS(t1_integrand(p, 1.0, 0.0), GeometryError);
        // V'' = V''' = V'''' = 0 at x = 0
        const Potential flat = parse_potential("x^6 + 6*x + 20");
        const WellGeometry g = find_turning_points(flat, 40.0);
        REQUIRE(g.inside(0.0));
        CHECK(std::abs(t1_integrand(flat, g, 0.0)) < 1e-15);
    }

    TEST_CASE("Im D1 two forms agree")
    {
        const Potential p = parse_potential("x^2 + 0.1*x^4");
        const D1Result r = im_d1(p, 1.0, 0.3);
        CHECK(r.value == doctest::Approx(-0.0892997853748886).epsilon(1e-10));
        CHECK(std::abs(r.value - r.value_direct) < 1e-8);
        CHECK(im_d1(p, 1.0, 0.0).value == 0.0);

        const Potential q = parse_potential("x^2 - 0.3*x^3 + 0.2*x^4");
        for (double xi : {0.1, 0.4, 0.7}) {
            const D1Result s = im_d1(q, 1.5, xi);
            CHECK(std::abs(s.value - s.value_direct) < 1e-8);
        }
    }

    TEST_CASE("closed loop of T1 equals -S2")
    {
        for (const char* text : {"x^4", "x^2 + 0.1*x^4", "x^2 - 0.3*x^3 + 0.2*x^4"}) {
            const Potential p = parse_potential(text);
            for (double E : {0.5, 1.0, 2.0}) {
                CAPTURE(text);
                CAPTURE(E);
                const WellGeometry g = find_turning_points(p, E);
                const LoopT1Result l = loop_t1(p, g);
                const double s2 = correction_s2(p, E).value;
                CHECK(std::abs(l.value + s2) <= 1e-5 * std::max(std::abs(s2), 1e-3));
            }
        }
        const WellGeometry g = find_turning_points(parse_potential("x^2"), 1.0);
        CHECK(std::abs(loop_t1(parse_potential("x^2"), g).value) < 1e-10);
    }

    TEST_CASE("S2 for x^4 matches the Beta closed form")
    {
        const S2Result s = correction_s2(parse_potential("x^4"), 1.0);
        const double want = std::tgamma(0.75) * std::sqrt(pi) / (8 * std::tgamma(1.25));
        CHECK(std::abs(s.value - want) < 1e-8);
        CHECK(std::abs(s.value - 14.378 / 48) < 1e-5);
    }
}
