#include "bsq/bs_solver.hpp"

#include "bsq/errors.hpp"

#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <string>

namespace bsq {

namespace {

constexpr double kPi = std::numbers::pi;

struct ActionEval
{
    double S0 = 0.0;
    double S2 = 0.0;
    double T = 0.0;
};

ActionEval evaluate(const Potential& p, double E, int order, bool with_period, Interval window)
{
    const WellGeometry g = find_turning_points(p, E, window);
    ActionEval a;
    a.S0 = action_s0(p, g).value;
    if (order == 2)
        a.S2 = correction_s2(p, E, 0.0, window).value;
    if (with_period)
        a.T = period_t(p, g).value;
    return a;
}

double action_of(const ActionEval& a, double h, int order)
{
    double s = a.S0 - kPi * h;
    if (order == 2)
        s -= h * h * a.S2;
    return s;
}

void check_order(int order)
{
    if (order != 1 && order != 2)
        throw Error("order must be 1 or 2");
}

} // namespace

double semiclassical_action(const Potential& p, double E, double h, int order, Interval window)
{
    check_order(order);
    return action_of(evaluate(p, E, order, false, window), h, order);
}

double semiclassical_action(const Potential& p, double E, double h, int order)
{
    return semiclassical_action(p, E, h, order, search_window(p));
}

std::vector<BsLevel> enumerate_levels(const Potential& p, Interval energies, double h, int order,
                                      Interval window, const LevelOptions& opt)
{
    check_order(order);
    if (!(h > 0.0))
        throw Error("h must be positive");
    std::vector<BsLevel> levels;
    const WellMinimum wm = well_minimum(p, window);
    if (!(energies.hi > wm.v))
        return levels;
    const double lo = std::max(energies.lo, wm.v + 1e-4 * (energies.hi - wm.v));
    if (!(energies.hi > lo))
        return levels;

    const int m = std::max(opt.grid_points, 2);
    std::vector<double> es(m), ss(m);
    for (int i = 0; i < m; ++i) {
        es[i] = lo + (energies.hi - lo) * i / (m - 1);
        ss[i] = semiclassical_action(p, es[i], h, order, window);
        if (i > 0 && !(ss[i] > ss[i - 1]))
            throw NumericError("semiclassical action is not increasing between E = " + std::to_string(es[i - 1]) +
                               " and E = " + std::to_string(es[i]));
    }

    const double quantum = 2.0 * kPi * h;
    const int n_first = std::max(0, static_cast<int>(std::ceil(ss.front() / quantum)));
    const int n_last = static_cast<int>(std::floor(ss.back() / quantum));
    std::size_t cell = 0;
    for (int n = n_first; n <= n_last; ++n) {
        const double target = quantum * n;
        while (cell + 2 < es.size() && ss[cell + 1] < target)
            ++cell;
        double a = es[cell], b = es[cell + 1];
        double fa = ss[cell] - target, fb = ss[cell + 1] - target;
        const double tol = 1e-12 * std::max(1.0, quantum * n);

        BsLevel lv;
        lv.n = n;
        lv.h = h;
        lv.order = order;
        double x = (fb - fa) != 0.0 ? a - fa * (b - a) / (fb - fa) : 0.5 * (a + b);
        double best_x = std::fabs(fa) < std::fabs(fb) ? a : b;
        double best_f = std::min(std::fabs(fa), std::fabs(fb));
        for (int it = 1; it <= opt.max_iterations; ++it) {
            lv.iterations = it;
            const ActionEval ev = evaluate(p, x, order, true, window);
            const double f = action_of(ev, h, order) - target;
            if (std::fabs(f) < best_f) {
                best_f = std::fabs(f);
                best_x = x;
            }
            if (std::fabs(f) <= tol)
                break;
            if (f < 0.0) {
                a = x;
                fa = f;
            } else {
                b = x;
                fb = f;
            }
            if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(x)))
                break;
            double nx = x - f / ev.T;
            if (!(nx > a && nx < b))
                nx = 0.5 * (a + b);
            x = nx;
        }
        lv.E = best_x;
        lv.residual = best_f;
        levels.push_back(lv);
    }
    return levels;
}

std::vector<BsLevel> enumerate_levels(const Potential& p, Interval energies, double h, int order)
{
    return enumerate_levels(p, energies, h, order, search_window(p));
}

GramValue gram_determinant(const Potential& p, double E, double h, Interval window)
{
    const ActionEval a = evaluate(p, E, 2, false, window);
    GramValue gv;
    gv.E = E;
    gv.h = h;
    gv.argument = (a.S0 - h * h * a.S2) / (2.0 * h);
    const double c = std::cos(gv.argument);
    gv.value = -c * c;
    return gv;
}

GramValue gram_determinant(const Potential& p, double E, double h)
{
    return gram_determinant(p, E, h, search_window(p));
}

std::vector<GramValue> gram_scan(const Potential& p, Interval energies, double h, int points, Interval window)
{
    std::vector<GramValue> out;
    if (points < 2 || energies.empty())
        return out;
    out.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double E = energies.lo + energies.width() * i / (points - 1);
        out.push_back(gram_determinant(p, E, h, window));
    }
    return out;
}

std::vector<double> gram_zeros(const Potential& p, Interval energies, double h, int points, Interval window)
{
    const auto scan = gram_scan(p, energies, h, points, window);
    std::vector<double> zeros;
    for (std::size_t i = 1; i + 1 < scan.size(); ++i) {
        const double v = scan[i].value;
        if (!(v > -0.25 && v >= scan[i - 1].value && v >= scan[i + 1].value))
            continue;
        double a = scan[i - 1].E, b = scan[i + 1].E;
        double ca = std::cos(scan[i - 1].argument);
        const double cb = std::cos(scan[i + 1].argument);
        if ((ca < 0.0) == (cb < 0.0))
            continue;
        while (b - a > 1e-13 * std::max(1.0, std::fabs(a))) {
            const double mid = 0.5 * (a + b);
            const double cm = std::cos(gram_determinant(p, mid, h, window).argument);
            if (cm == 0.0) {
                a = b = mid;
                break;
            }
            if ((cm < 0.0) == (ca < 0.0)) {
                a = mid;
                ca = cm;
            } else {
                b = mid;
            }
        }
        const double z = 0.5 * (a + b);
        if (zeros.empty() || z - zeros.back() > 1e-9)
            zeros.push_back(z);
    }
    return zeros;
}

ActionAngleReport action_angle_check(const Potential& p, double E, Interval window)
{
    const WellMinimum wm = well_minimum(p, window);
    if (!(E > wm.v))
        throw GeometryError("E = " + std::to_string(E) + " is not above the well minimum");
    ActionAngleReport r;
    r.E = E;

    // Samples (tau_j, E_j) of the inverse function f0 = tau^{-1}; a degree-6
    // interpolant in u = tau - tau(E) gives f0' and f0''.
    constexpr int K = 7;
    const double delta = 5e-3 * (E - wm.v);
    std::array<double, K> u{}, e{};
    double tau0 = 0.0;
    for (int j = 0; j < K; ++j) {
        e[j] = E + (j - K / 2) * delta;
        const double tau = action_s0(p, find_turning_points(p, e[j], window)).value / (2.0 * kPi);
        if (j == K / 2)
            tau0 = tau;
        u[j] = tau;
    }
    for (auto& v : u)
        v -= tau0;
    // Solve the Vandermonde system by Gaussian elimination with partial pivoting.
    std::array<std::array<double, K + 1>, K> a{};
    for (int i = 0; i < K; ++i) {
        double pw = 1.0;
        for (int k = 0; k < K; ++k) {
            a[i][k] = pw;
            pw *= u[i];
        }
        a[i][K] = e[i];
    }
    for (int c = 0; c < K; ++c) {
        int piv = c;
        for (int i = c + 1; i < K; ++i)
            if (std::fabs(a[i][c]) > std::fabs(a[piv][c]))
                piv = i;
        std::swap(a[c], a[piv]);
        for (int i = c + 1; i < K; ++i) {
            const double f = a[i][c] / a[c][c];
            for (int k = c; k <= K; ++k)
                a[i][k] -= f * a[c][k];
        }
    }
    std::array<double, K> coef{};
    for (int i = K - 1; i >= 0; --i) {
        double s = a[i][K];
        for (int k = i + 1; k < K; ++k)
            s -= a[i][k] * coef[k];
        coef[i] = s / a[i][i];
    }

    const WellGeometry g = find_turning_points(p, E, window);
    r.tau = tau0;
    r.dtau_dE = period_t(p, g).value / (2.0 * kPi);
    r.f0_prime = coef[1];
    r.f0_second = 2.0 * coef[2];
    r.inverse_check = r.f0_prime * r.dtau_dE;
    r.f1 = 0.5 * r.f0_prime;
    r.implied_s1 = -2.0 * kPi * r.f1 / r.f0_prime;
    const double dJ = 12.0 * correction_s2(p, E, 0.0, window).value;
    const double f2 = r.f0_second / 8.0 + r.f0_prime * dJ / (24.0 * kPi);
    const double half_d = 0.5 * (0.25 * r.f0_second);  // (1/2) d/dtau (f1^2 / f0')
    r.implied_s2 = 2.0 * kPi * (half_d - f2) / r.f0_prime;
    return r;
}

ActionAngleReport action_angle_check(const Potential& p, double E)
{
    return action_angle_check(p, E, search_window(p));
}

} // namespace bsq
