#include "bsq/wkb.hpp"

#include "bsq/action.hpp"
#include "bsq/errors.hpp"
#include "bsq/quadrature.hpp"
#include "bsq/reference.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bsq {

namespace {

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 4> kGlNodes = {0.183434642495649804939476142360184, 0.525532409916328985817739049189246,
                                            0.796666477413626739591553936475830, 0.960289856497536231683560868569473};
constexpr std::array<double, 4> kGlWeights = {0.362683783378361982965150449277196, 0.313706645877887287337962201986601,
                                              0.222381034453374470544355994426241, 0.101228536046375503052752974223218};

template <class F>
double gauss_legendre8(F&& f, double a, double b)
{
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i)
        s += kGlWeights[i] * (f(c - hw * kGlNodes[i]) + f(c + hw * kGlNodes[i]));
    return s * hw;
}

double gap(const Potential& p, const WellGeometry& g, double x) { return std::max(0.0, g.E - p(x)); }

double y2_real(const Potential& p, const WellGeometry& g, double x)
{
    const double w = g.E - p(x);
    const double sw = std::sqrt(w);
    return p.eval(2, x) / (8.0 * w * sw) + 5.0 * std::pow(p.eval(1, x), 2) / (32.0 * w * w * sw);
}

// Finite part of the y2 integral from turning point t to t + dir*d, as minus
// half the integral round a circle of radius d about t. sqrt(E - V) is
// continued as sqrt(q) * sqrt(s) with s = dir (z - t) tracked through the
// full turn.
double keyhole_finite_part(const Potential& p, double E, double t, double dir, double d)
{
    auto f = [&](double th) {
        const C e = std::polar(1.0, th);
        const C s = d * e;
        const C z = t + dir * s;
        const C q = (C(E) - p.eval(0, z)) / s;
        const C root = std::sqrt(q) * std::sqrt(d) * std::polar(1.0, 0.5 * th);
        const C dz = dir * C(0.0, 1.0) * s;
        const C y2 = p.eval(2, z) / (8.0 * root * root * root) +
                     5.0 * p.eval(1, z) * p.eval(1, z) / (32.0 * std::pow(root, 5));
        return y2 * dz;
    };
    const auto k = integrate<C>(f, 0.0, 2.0 * kPi);
    if (!k.converged)
        throw NumericError("keyhole integral did not converge");
    return -0.5 * k.value.real();
}

} // namespace

double wkb_phase(const Potential& p, const WellGeometry& g, double x, int branch)
{
    if (!(x >= g.x_left && x <= g.x_right))
        throw GeometryError("x = " + std::to_string(x) + " outside the well");
    if (x == g.x_right)
        return 0.0;
    const auto q = quad_well([&](double y) { return std::sqrt(gap(p, g, y)); }, x, g.x_right, true);
    return branch >= 0 ? -q.value : q.value;
}

WkbState::WkbState(const Potential& p, const WellGeometry& g, double h, WkbOptions opt)
    : p_(&p), g_(g), h_(h), opt_(opt)
{
    if (!(h > 0.0))
        throw Error("h must be positive");
    if (opt.correction == PhaseCorrection::turning_point_arc && opt.anchor != Anchor::right)
        throw Error("the turning-point arc correction is defined at the right turning point");
    const WellMinimum wm = well_minimum(p, Interval{g.x_left, g.x_right});
    xi_min_ = opt.xi_min_fraction * std::sqrt(std::max(0.0, g.E - wm.v));
    x_min_ = wm.x;

    if (opt.correction == PhaseCorrection::spatial) {
        const bool right = opt.anchor == Anchor::right;
        const double t = right ? g.x_right : g.x_left;
        const double dir = right ? -1.0 : 1.0;
        const double d = 0.1 * g.width();
        z0_ = t + dir * d;
        fp_anchor_ = keyhole_finite_part(p, g.E, t, dir, d);
        const double half = keyhole_finite_part(p, g.E, t, dir, 0.5 * d);
        const auto link = integrate<double>([&](double x) { return y2_real(p, g_, x); }, t + dir * 0.5 * d, z0_);
        keyhole_discrepancy_ = std::fabs(fp_anchor_ - (half + link.value));
    }
}

bool WkbState::admissible(double x) const
{
    if (opt_.correction == PhaseCorrection::turning_point_arc && !(x > x_min_))
        return false;
    return g_.inside(x) && std::sqrt(gap(*p_, g_, x)) >= xi_min_;
}

void WkbState::check(double x) const
{
    if (!g_.inside(x))
        throw GeometryError("x = " + std::to_string(x) + " outside the well");
    if (opt_.correction == PhaseCorrection::turning_point_arc && !(x > x_min_))
        throw GeometryError("arc from x_E to x = " + std::to_string(x) + " crosses V' = 0");
    if (!admissible(x))
        throw GeometryError("x = " + std::to_string(x) + " too close to a turning point (xi < " +
                            std::to_string(xi_min_) + ")");
}

double WkbState::correction(double x) const
{
    switch (opt_.correction) {
    case PhaseCorrection::none: return 0.0;
    case PhaseCorrection::turning_point_arc:
        return im_d1(*p_, g_, std::sqrt(gap(*p_, g_, x))).value / std::sqrt(2.0);
    case PhaseCorrection::spatial: {
        const auto q = integrate<double>([&](double y) { return y2_real(*p_, g_, y); }, z0_, x);
        return fp_anchor_ + q.value;
    }
    }
    return 0.0;
}

double WkbState::phase(double x) const
{
    check(x);
    double base;
    if (opt_.anchor == Anchor::right)
        base = wkb_phase(*p_, g_, x, +1);
    else
        base = quad_well([&](double y) { return std::sqrt(gap(*p_, g_, y)); }, g_.x_left, x, true).value;
    return base + h_ * h_ * correction(x);
}

std::complex<double> WkbState::assemble(double x, double total_phase) const
{
    const double xi = std::sqrt(gap(*p_, g_, x));
    const double amp = opt_.amplitude / std::sqrt(xi);
    const double maslov = opt_.anchor == Anchor::right ? kPi / 4.0 : -kPi / 4.0;
    const double arg = maslov + total_phase / h_;
    return 0.5 * amp * (std::polar(1.0, arg) + std::polar(1.0, -arg));
}

std::complex<double> WkbState::operator()(double x) const { return assemble(x, phase(x)); }

std::complex<double> WkbState::branch(double x, int sign) const
{
    const double xi = std::sqrt(gap(*p_, g_, x));
    const double maslov = opt_.anchor == Anchor::right ? kPi / 4.0 : -kPi / 4.0;
    const double arg = (sign >= 0 ? 1.0 : -1.0) * (maslov + phase(x) / h_);
    return 0.5 * opt_.amplitude / std::sqrt(xi) * std::polar(1.0, arg);
}

std::array<std::complex<double>, 5> WkbState::stencil(double x, double delta, int branch) const
{
    const double base = phase(x);
    const double c0 = opt_.correction == PhaseCorrection::turning_point_arc ? correction(x) : 0.0;
    const double maslov = opt_.anchor == Anchor::right ? kPi / 4.0 : -kPi / 4.0;
    std::array<std::complex<double>, 5> out{};
    for (int k = -2; k <= 2; ++k) {
        const double xk = x + k * delta;
        check(xk);
        double ph = base;
        if (k != 0) {
            ph += gauss_legendre8([&](double y) { return std::sqrt(gap(*p_, g_, y)); }, x, xk);
            if (opt_.correction == PhaseCorrection::spatial)
                ph += h_ * h_ * gauss_legendre8([&](double y) { return y2_real(*p_, g_, y); }, x, xk);
            else if (opt_.correction == PhaseCorrection::turning_point_arc)
                ph += h_ * h_ * (correction(xk) - c0);
        }
        if (branch == 0) {
            out[k + 2] = assemble(xk, ph);
        } else {
            const double xi = std::sqrt(gap(*p_, g_, xk));
            const double arg = (branch > 0 ? 1.0 : -1.0) * (maslov + ph / h_);
            out[k + 2] = 0.5 * opt_.amplitude / std::sqrt(xi) * std::polar(1.0, arg);
        }
    }
    return out;
}

std::complex<double> wkb_eval(const Potential& p, const WellGeometry& g, double h, double x, bool with_h2_correction)
{
    WkbOptions opt;
    opt.correction = with_h2_correction ? PhaseCorrection::turning_point_arc : PhaseCorrection::none;
    return WkbState(p, g, h, opt)(x);
}

namespace {

double stencil_residual(const WkbState& u, double x, int branch)
{
    const double h = u.h();
    const double delta = 0.01 * h;
    const auto s = u.stencil(x, delta, branch);
    const C d2 = (-s[0] + 16.0 * s[1] - 30.0 * s[2] + 16.0 * s[3] - s[4]) / (12.0 * delta * delta);
    const double v = u.potential()(x);
    return std::abs(-h * h * d2 + (v - u.geometry().E) * s[2]);
}

} // namespace

double residual_estimate(const WkbState& u, double x) { return stencil_residual(u, x, 0); }

double residual_envelope(const WkbState& u, double x) { return 2.0 * stencil_residual(u, x, +1); }

double residual_estimate(const Potential& p, const WellGeometry& g, double h, double x, WkbOptions opt)
{
    return residual_estimate(WkbState(p, g, h, opt), x);
}

ResidualFit residual_order(const Potential& p, const WellGeometry& g, double x, const std::vector<double>& hs,
                           WkbOptions opt)
{
    ResidualFit fit;
    for (double h : hs) {
        fit.hs.push_back(h);
        fit.residuals.push_back(residual_envelope(WkbState(p, g, h, opt), x));
    }
    fit.order = fit_order(fit.hs, fit.residuals).order;
    return fit;
}

double connection_mismatch(const Potential& p, const WellGeometry& g, double h, int samples)
{
    WkbOptions r;
    r.correction = PhaseCorrection::spatial;
    WkbOptions l = r;
    l.anchor = Anchor::left;
    const WkbState ur(p, g, h, r), ul(p, g, h, l);
    double plus = 0.0, minus = 0.0, scale = 0.0;
    for (int i = 1; i < samples; ++i) {
        const double x = g.x_left + g.width() * i / samples;
        if (!ur.admissible(x))
            continue;
        const double a = ur(x).real();
        const double b = ul(x).real();
        plus = std::max(plus, std::fabs(a - b));
        minus = std::max(minus, std::fabs(a + b));
        scale = std::max(scale, std::fabs(a));
    }
    if (scale == 0.0)
        throw GeometryError("no admissible overlap points");
    return std::min(plus, minus) / scale;
}

double density_ratio(const WkbState& u, double x)
{
    const double xi = std::sqrt(std::max(0.0, u.geometry().E - u.potential()(x)));
    const double wavelength = 2.0 * kPi * u.h() / xi;
    constexpr int n = 64;
    double sum = 0.0;
    for (int j = 0; j < n; ++j)
        sum += std::norm(u(x + wavelength * ((j + 0.5) / n - 0.5)));
    return sum / n * 2.0 * xi;
}

} // namespace bsq
