#include "bsq/action.hpp"

#include "bsq/errors.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace bsq {

namespace {

constexpr double kLoopRelTol = 1e-10;

QuadResult<double> checked(QuadResult<double> r, const char* what)
{
    if (!r.converged && r.error > kLoopRelTol * std::fabs(r.value))
        throw NumericError(std::string(what) + ": quadrature did not converge (error estimate " +
                           std::to_string(r.error) + ")");
    return r;
}

// E - V at distance d from turning point t (x = t + dir * d), by Taylor
// expansion; direct subtraction loses all digits next to the endpoint. The
// root residual V(t) - E is dropped so the model vanishes exactly at t.
double gap_near(const Potential& p, double t, double dir, double d)
{
    const Derivs v = eval_derivs(p, t);
    const double s = dir * d;
    return -s * (v.d1 + s * (v.d2 / 2.0 + s * (v.d3 / 6.0 + s * v.d4 / 24.0)));
}

template <class F>
QuadResult<double> loop(const Potential& p, const WellGeometry& g, F f, const char* what)
{
    const double m = 0.5 * (g.x_left + g.x_right);
    const double r = 0.5 * (g.x_right - g.x_left);
    auto integrand = [&](double th) {
        const double sn = std::sin(th), cs = std::cos(th);
        const double x = m + r * sn;
        // Distances to both ends without cancellation.
        const double dl = sn < 0.0 ? r * cs * cs / (1.0 - sn) : r * (1.0 + sn);
        const double dr = sn > 0.0 ? r * cs * cs / (1.0 + sn) : r * (1.0 - sn);
        double w;
        if (dl < 1e-3 * r)
            w = gap_near(p, g.x_left, 1.0, dl);
        else if (dr < 1e-3 * r)
            w = gap_near(p, g.x_right, -1.0, dr);
        else
            w = g.E - p(x);
        return f(x, w > 0.0 ? w : 0.0) * (r * cs);
    };
    return checked(integrate<double>(integrand, -std::numbers::pi / 2, std::numbers::pi / 2), what);
}

} // namespace

QuadResult<double> action_s0(const Potential& p, const WellGeometry& g)
{
    return loop(p, g, [](double, double w) { return 2.0 * std::sqrt(w); }, "S0");
}

QuadResult<double> period_t(const Potential& p, const WellGeometry& g)
{
    return loop(p, g, [](double, double w) { return 1.0 / std::sqrt(w); }, "T");
}

QuadResult<double> loop_v2(const Potential& p, const WellGeometry& g)
{
    return loop(p, g, [&](double x, double w) { return p.eval(2, x) / std::sqrt(w); }, "J");
}

S2Result correction_s2(const Potential& p, double E, double dE, Interval window)
{
    const WellMinimum wm = well_minimum(p, window);
    if (!(E > wm.v))
        throw GeometryError("E = " + std::to_string(E) + " is not above the well minimum");
    double step = dE > 0.0 ? dE : std::max(1e-4, 1e-3 * std::fabs(E));
    step = std::min(step, 0.5 * (E - wm.v));

    const double J0 = loop_v2(p, find_turning_points(p, E, window)).value;
    auto central = [&](double d) {
        const double jp = loop_v2(p, find_turning_points(p, E + d, window)).value;
        const double jm = loop_v2(p, find_turning_points(p, E - d, window)).value;
        return (jp - jm) / (2.0 * d);
    };
    // Noise floor for the agreement test when dJ/dE itself vanishes.
    const double scale = std::fabs(J0) / (E - wm.v);

    double d_coarse = central(step);
    double d_fine = central(0.5 * step);
    double prev = (4.0 * d_fine - d_coarse) / 3.0;
    S2Result out;
    for (int k = 1; k <= 12; ++k) {
        step *= 0.5;
        d_coarse = d_fine;
        d_fine = central(0.5 * step);
        const double cur = (4.0 * d_fine - d_coarse) / 3.0;
        out.value = cur / 12.0;
        out.error = std::fabs(cur - prev) / 12.0;
        out.step = step;
        out.halvings = k;
        if (std::fabs(cur - prev) <= 1e-6 * std::max(std::fabs(cur), scale)) {
            // below what the J quadrature tolerance can resolve
            const double floor = QuadRule::standard().rel_tol * std::fabs(J0) / step / 12.0;
            if (std::fabs(out.value) <= floor)
                out.value = 0.0;
            return out;
        }
        prev = cur;
    }
    throw NumericError("correction_s2: Richardson estimates did not settle at E = " + std::to_string(E));
}

S2Result correction_s2(const Potential& p, double E, double dE)
{
    return correction_s2(p, E, dE, search_window(p));
}

ActionData action_data(const Potential& p, double E, Interval window)
{
    const WellGeometry g = find_turning_points(p, E, window);
    ActionData a;
    a.E = E;
    const auto s0 = action_s0(p, g);
    const auto t = period_t(p, g);
    const auto j = loop_v2(p, g);
    const auto s2 = correction_s2(p, E, 0.0, window);
    a.S0 = s0.value;
    a.S0_error = s0.error;
    a.T = t.value;
    a.T_error = t.error;
    a.J = j.value;
    a.J_error = j.error;
    a.S2 = s2.value;
    a.S2_error = s2.error;
    return a;
}

ActionData action_data(const Potential& p, double E) { return action_data(p, E, search_window(p)); }

// --- T1 and D1 ------------------------------------------------------------------

double t1_integrand(const Potential& p, const WellGeometry& g, double x)
{
    const CurveFrame f = curve_frame(p, g, x);
    if (!f.psi2)
        throw GeometryError("T1 unavailable at x = " + std::to_string(x) + " (V' = 0)");
    const double a = f.alpha;
    const double psi2 = *f.psi2;
    const double ap = *f.alpha_p;
    const Derivs d = eval_derivs(p, x);
    return (psi2 * psi2 / 24.0 * d.d4 + ap * psi2 / (6.0 * a) * d.d3 + ap * ap / (8.0 * a * a) * d.d2) / a;
}

double t1_integrand(const Potential& p, double E, double x)
{
    return t1_integrand(p, find_turning_points(p, E), x);
}

namespace {

// Quantities along the right-wall arc at zeta, x = -psi'(zeta).
struct ArcPoint
{
    double alpha, psi2, psi3, ap, theta0, theta0p;
    Derivs d;
};

ArcPoint arc_point(const Potential& p, double E, double zeta, Interval wall)
{
    const double x = solve_level(p, E - zeta * zeta, wall);
    ArcPoint a;
    a.d = eval_derivs(p, x);
    a.alpha = a.d.d1;
    a.psi2 = 2.0 * zeta / a.alpha;
    a.ap = -a.psi2 * a.d.d2;
    a.psi3 = 2.0 / a.alpha - 2.0 * zeta * a.ap / (a.alpha * a.alpha);
    const double app = -a.psi3 * a.d.d2 + a.psi2 * a.psi2 * a.d.d3;
    a.theta0 = a.ap / (2.0 * a.alpha);
    a.theta0p = app / (2.0 * a.alpha) - a.ap * a.ap / (2.0 * a.alpha * a.alpha);
    return a;
}

} // namespace

D1Result im_d1(const Potential& p, double E, double xi_hi, Interval window)
{
    return im_d1(p, find_turning_points(p, E, window), xi_hi);
}

D1Result im_d1(const Potential& p, const WellGeometry& g, double xi_hi)
{
    D1Result r;
    if (xi_hi < 0.0)
        throw GeometryError("im_d1: negative arc end");
    if (xi_hi == 0.0)
        return r;
    const double E = g.E;
    const WellMinimum wm = well_minimum(p, Interval{g.x_left, g.x_right});
    if (!(E - xi_hi * xi_hi > wm.v))
        throw GeometryError("im_d1: arc crosses alpha = 0");
    const Interval wall{wm.x, g.x_right};
    const double x_end = solve_level(p, E - xi_hi * xi_hi, wall);
    for (int i = 0; i <= 64; ++i) {
        const double x = x_end + (g.x_right - x_end) * i / 64.0;
        if (!(p.eval(1, x) >= kDegenerateSlope))
            throw GeometryError("im_d1: arc crosses alpha = 0");
    }

    auto form_a = [&](double z) {
        const ArcPoint a = arc_point(p, E, z, wall);
        return (a.psi2 * a.psi2 / 24.0 * a.d.d4 + a.ap * a.psi2 / (6.0 * a.alpha) * a.d.d3 +
                a.ap * a.ap / (8.0 * a.alpha * a.alpha) * a.d.d2) /
               a.alpha;
    };
    auto form_b = [&](double z) {
        const ArcPoint a = arc_point(p, E, z, wall);
        return -(a.psi2 * a.psi2 / 8.0 * a.d.d4 + (a.theta0 * a.psi2 / 2.0 - a.psi3 / 6.0) * a.d.d3 +
                 0.5 * (a.theta0 * a.theta0 - a.theta0p) * a.d.d2) /
               a.alpha;
    };
    const auto qa = integrate<double>(form_a, 0.0, xi_hi);
    const auto qb = integrate<double>(form_b, 0.0, xi_hi);
    if (!qa.converged || !qb.converged)
        throw NumericError("im_d1: arc quadrature did not converge");
    const ArcPoint end = arc_point(p, E, xi_hi, wall);
    const double boundary =
        end.psi2 / (6.0 * end.alpha) * end.d.d3 + end.ap / (4.0 * end.alpha * end.alpha) * end.d.d2;
    r.value = qa.value + boundary;
    r.value_direct = qb.value;
    r.discrepancy = std::fabs(r.value - r.value_direct);
    return r;
}

D1Result im_d1(const Potential& p, double E, double xi_hi) { return im_d1(p, E, xi_hi, search_window(p)); }

LoopT1Result loop_t1(const Potential& p, const WellGeometry& g)
{
    using C = std::complex<double>;
    const double m = 0.5 * (g.x_left + g.x_right);
    const double r = 0.5 * (g.x_right - g.x_left);
    auto run = [&](double delta) {
        auto f = [&](double th) {
            const double s = std::sin(th), c = std::cos(th);
            const C z(m - r * c, delta * s * s);
            const C dz(r * s, 2.0 * delta * s * c);
            const C xi = std::sqrt(C(g.E) - p.eval(0, z));
            const C a = p.eval(1, z);
            const C v2 = p.eval(2, z), v3 = p.eval(3, z), v4 = p.eval(4, z);
            const C bracket = v4 / 6.0 - 2.0 * v2 * v3 / (3.0 * a) + v2 * v2 * v2 / (2.0 * a * a);
            return -(xi / (a * a)) * bracket * dz;
        };
        const auto q = integrate<C>(f, 0.0, std::numbers::pi);
        if (!q.converged)
            throw NumericError("loop_t1: contour quadrature did not converge");
        return q.value.real();
    };
    const double delta = 0.25 * r;
    LoopT1Result out;
    out.value = run(delta);
    out.discrepancy = std::fabs(out.value - run(0.5 * delta));
    return out;
}

} // namespace bsq
