#include "bsq/geometry.hpp"

#include "bsq/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace bsq {

Interval search_window(const Potential& p)
{
    if (p.hint())
        return *p.hint();
    return Interval{-20.0, 20.0};
}

namespace {

std::vector<double> scan_grid(Interval w)
{
    std::vector<double> xs(kScanPoints);
    for (int i = 0; i < kScanPoints; ++i)
        xs[i] = w.lo + w.width() * static_cast<double>(i) / (kScanPoints - 1);
    return xs;
}

double golden_min(const Potential& p, double a, double b)
{
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = p(c), fd = p(d);
    for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, std::fabs(a)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = p(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = p(d);
        }
    }
    return 0.5 * (a + b);
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

WellMinimum well_minimum(const Potential& p, Interval window)
{
    if (window.empty())
        throw GeometryError("empty search window");
    const auto xs = scan_grid(window);
    std::size_t k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double v = p(xs[i]);
        if (v < best) {
            best = v;
            k = i;
        }
    }
    const double a = xs[k == 0 ? 0 : k - 1];
    const double b = xs[std::min(k + 1, xs.size() - 1)];
    double x = golden_min(p, a, b);
    // Newton on V' for the last digits; golden section only resolves sqrt(eps).
    for (int it = 0; it < 8; ++it) {
        const double d1 = p.eval(1, x);
        const double d2 = p.eval(2, x);
        if (!(d2 > 0.0))
            break;
        const double nx = x - d1 / d2;
        if (!(nx >= a && nx <= b))
            break;
        if (std::fabs(nx - x) <= 1e-15 * std::max(1.0, std::fabs(x))) {
            x = nx;
            break;
        }
        x = nx;
    }
    double v = p(x);
    if (best < v) {
        x = xs[k];
        v = best;
    }
    return {x, v};
}

double solve_level(const Potential& p, double level, Interval bracket)
{
    double lo = bracket.lo, hi = bracket.hi;
    double flo = p(lo) - level;
    double fhi = p(hi) - level;
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw GeometryError("no sign change of V - " + fmt(level) + " in [" + fmt(lo) + ", " + fmt(hi) + "]");
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = p(x) - level;
        if (f == 0.0)
            return x;
        if ((f < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = f;
        } else {
            hi = x;
        }
        const double d = p.eval(1, x);
        double nx = (d != 0.0) ? x - f / d : 0.5 * (lo + hi);
        if (!(nx > lo && nx < hi))
            nx = 0.5 * (lo + hi);
        const double tol = 1e-13 * std::max(1.0, std::fabs(x));
        if (std::fabs(nx - x) <= tol || (hi - lo) <= tol) {
            x = nx;
            break;
        }
        x = nx;
    }
    // Polish past the stopping tolerance while Newton keeps reducing |f|.
    for (int it = 0; it < 3; ++it) {
        const double f = p(x) - level;
        const double d = p.eval(1, x);
        if (f == 0.0 || d == 0.0)
            break;
        const double nx = x - f / d;
        if (!(std::fabs(p(nx) - level) < std::fabs(f)))
            break;
        x = nx;
    }
    return x;
}

WellGeometry find_turning_points(const Potential& p, double E, Interval window)
{
    if (window.empty())
        throw GeometryError("empty search window");
    const auto xs = scan_grid(window);
    std::vector<double> s(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        s[i] = p(xs[i]) - E;

    // Components of {V - E <= 0} on the scan grid.
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] > 0.0)
            continue;
        std::size_t j = i;
        while (j + 1 < s.size() && s[j + 1] <= 0.0)
            ++j;
        runs.emplace_back(i, j);
        i = j;
    }

    Interval bl, br;
    if (runs.empty()) {
        // The well may be narrower than the scan spacing.
        std::size_t k = 0;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (s[i] < s[k])
                k = i;
        if (k == 0 || k + 1 == s.size())
            throw GeometryError("no sign change of V - E in window: E = " + fmt(E) + " is below the well");
        const double xm = golden_min(p, xs[k - 1], xs[k + 1]);
        if (!(p(xm) < E))
            throw GeometryError("no sign change of V - E in window: E = " + fmt(E) + " is below the well");
        bl = {xs[k - 1], xm};
        br = {xm, xs[k + 1]};
    } else {
        if (runs.size() > 1)
            throw GeometryError("more than one well below E = " + fmt(E) + " in window");
        const auto [i, j] = runs.front();
        if (i == 0 || j + 1 == s.size())
            throw GeometryError("classically allowed region at E = " + fmt(E) + " reaches the window edge");
        bl = {xs[i - 1], xs[i]};
        br = {xs[j], xs[j + 1]};
    }

    WellGeometry g;
    g.E = E;
    g.bracket_left = bl;
    g.bracket_right = br;
    g.x_left = solve_level(p, E, bl);
    g.x_right = solve_level(p, E, br);
    g.residual_left = std::fabs(p(g.x_left) - E);
    g.residual_right = std::fabs(p(g.x_right) - E);
    g.slope_left = p.eval(1, g.x_left);
    g.slope_right = p.eval(1, g.x_right);
    if (!(g.slope_left <= -kDegenerateSlope) || !(g.slope_right >= kDegenerateSlope))
        throw GeometryError("degenerate turning point at E = " + fmt(E) + " (|V'| below 1e-8)");
    const double tol = 1e-12 * std::max(1.0, std::fabs(E));
    if (g.residual_left > tol || g.residual_right > tol)
        throw NumericError("turning point residual above tolerance at E = " + fmt(E));
    return g;
}

WellGeometry find_turning_points(const Potential& p, double E)
{
    return find_turning_points(p, E, search_window(p));
}

CurveFrame curve_frame(const Potential& p, const WellGeometry& g, double x)
{
    if (!g.inside(x))
        throw GeometryError("x = " + fmt(x) + " outside the well [" + fmt(g.x_left) + ", " + fmt(g.x_right) + "]");
    CurveFrame f;
    f.x = x;
    f.xi = std::sqrt(std::max(0.0, g.E - p(x)));
    f.alpha = p.eval(1, x);
    if (f.alpha != 0.0) {
        const double psi2 = 2.0 * f.xi / f.alpha;
        const double ap = -psi2 * p.eval(2, x);
        f.psi2 = psi2;
        f.alpha_p = ap;
        f.theta0 = ap / (2.0 * f.alpha);
    }
    return f;
}

} // namespace bsq
