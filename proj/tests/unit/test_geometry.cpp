#include <doctest.h>

#include "../oracles/oracles.hpp"

#include "bsq/errors.hpp"
#include "bsq/geometry.hpp"

#include <cmath>

using namespace bsq;

TEST_SUITE("classical_geometry")
{
    TEST_CASE("turning points of simple wells")
    {
        const Interval w{-3, 3};
        WellGeometry g = find_turning_points(parse_potential("x^2"), 1.0, w);
        CHECK(g.x_left == doctest::Approx(-1.0).epsilon(1e-13));
        CHECK(g.x_right == doctest::Approx(1.0).epsilon(1e-13));

        g = find_turning_points(parse_potential("x^4"), 16.0, w);
        CHECK(g.x_left == doctest::Approx(-2.0).epsilon(1e-13));
        CHECK(g.x_right == doctest::Approx(2.0).epsilon(1e-13));

        g = find_turning_points(parse_potential("x^2 + x^4"), 2.0, w);
        CHECK(g.x_left == doctest::Approx(-1.0).epsilon(1e-13));
        CHECK(g.x_right == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(g.slope_left < 0.0);
        CHECK(g.slope_right > 0.0);
        CHECK(g.residual_right < 1e-12);
    }

    TEST_CASE("well hypothesis violations")
    {
        const Interval w{-3, 3};
        CHECK_THROWS_AS(find_turning_points(parse_potential("x^2"), -1.0, w), GeometryError);
        CHECK_THROWS_AS(find_turning_points(parse_potential("x^2"), 10.0, w), GeometryError);
        CHECK_THROWS_AS(find_turning_points(parse_potential("(x^2 - 1)^2"), 0.5, w), GeometryError);
        CHECK_THROWS_AS(find_turning_points(parse_potential("x"), 0.0, w), GeometryError);
    }

    TEST_CASE("well minimum")
    {
        const WellMinimum m = well_minimum(parse_potential("(x - 0.3)^2 + 1.5"), {-3, 3});
        CHECK(m.x == doctest::Approx(0.3).epsilon(1e-10));
        CHECK(m.v == doctest::Approx(1.5).epsilon(1e-14));
    }

    TEST_CASE("curve frame")
    {
        const Potential p = parse_potential("x^2");
        const WellGeometry g = find_turning_points(p, 1.0, {-3, 3});
        const CurveFrame c0 = curve_frame(p, g, 0.0);
        CHECK(c0.xi == 1.0);
        CHECK(c0.alpha == 0.0);
        CHECK_FALSE(c0.psi2.has_value());

        const double x = 1.0 / std::sqrt(2.0);
        const CurveFrame c = curve_frame(p, g, x);
        CHECK(c.xi == doctest::Approx(x).epsilon(1e-15));
        CHECK(c.alpha == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        REQUIRE(c.psi2.has_value());
        CHECK(*c.psi2 == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(*c.alpha_p == doctest::Approx(-2.0).epsilon(1e-15));

        const CurveFrame edge = curve_frame(p, g, 1.0 - 1e-10);
        CHECK(edge.xi < 1e-4);
        CHECK(std::abs(*edge.psi2) < 1e-4);

        CHECK_THROWS_AS(curve_frame(p, g, 1.5), GeometryError);
    }

    TEST_CASE("energy conservation along the curve")
    {
        const Potential p = parse_potential("x^2 - 0.3*x^3 + 0.2*x^4");
        oracle::Gen gen(11);
        for (int i = 0; i < 100; ++i) {
            const double E = gen.uniform(0.05, 3.0);
            const WellGeometry g = find_turning_points(p, E);
            const double x = gen.uniform(g.x_left, g.x_right);
            const CurveFrame c = curve_frame(p, g, x);
            CHECK(std::abs(c.xi * c.xi + p(x) - E) <= 1e-12 * std::max(1.0, E));
        }
    }

    TEST_CASE("walls move outward with energy")
    {
        const Potential p = parse_potential("x^2 + 0.5*x^4");
        double l = 0.0;
        double r = 0.0;
        for (int i = 1; i <= 60; ++i) {
            const WellGeometry g = find_turning_points(p, 0.05 * i);
            if (i > 1) {
                CHECK(g.x_left < l);
                CHECK(g.x_right > r);
            }
            l = g.x_left;
            r = g.x_right;
        }
    }

    TEST_CASE("alpha' agrees with d alpha / d xi along the curve")
    {
        const Potential p = parse_potential("x^2 - 0.3*x^3 + 0.2*x^4");
        const double E = 1.2;
        const WellGeometry g = find_turning_points(p, E);
        for (double t : {0.2, 0.35, 0.6, 0.8}) {
            const double x = g.x_left + t * g.width();
            const CurveFrame c = curve_frame(p, g, x);
            if (std::abs(c.alpha) < 0.1) continue;
            // xi increases on the right wall when x moves left: dxi/dx = -alpha / (2 xi)
            const double dx = 1e-5;
            const CurveFrame a = curve_frame(p, g, x - dx);
            const CurveFrame b = curve_frame(p, g, x + dx);
            const double fd = (b.alpha - a.alpha) / (b.xi - a.xi);
            CHECK(*c.alpha_p == doctest::Approx(fd).epsilon(1e-5));
        }
    }

    TEST_CASE("solve_level refines to the bracketed root")
    {
        const Potential p = parse_potential("x^3 + x");
        const double r = solve_level(p, 2.0, {0.0, 3.0});
        CHECK(r == doctest::Approx(1.0).epsilon(1e-13));
    }
}
