#include "bsq/reference.hpp"

#include "bsq/errors.hpp"
#include "bsq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bsq {

Interval GridHamiltonian::gershgorin() const
{
    const double r = std::fabs(off);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const double radius = (i == 0 || i + 1 == diag.size()) && diag.size() > 1 ? r : (diag.size() > 1 ? 2 * r : 0);
        lo = std::min(lo, diag[i] - radius);
        hi = std::max(hi, diag[i] + radius);
    }
    return {lo, hi};
}

GridHamiltonian build_grid_hamiltonian(const Potential& p, double h, Interval domain, int N)
{
    if (N < 1)
        throw Error("grid size must be at least 1");
    if (domain.empty())
        throw Error("empty grid domain");
    if (!(h > 0.0))
        throw Error("h must be positive");
    GridHamiltonian H;
    H.domain = domain;
    H.N = N;
    H.h = h;
    H.delta = domain.width() / (N + 1);
    const double k = h * h / (H.delta * H.delta);
    H.off = -k;
    H.diag.resize(N);
    for (int i = 0; i < N; ++i)
        H.diag[i] = 2.0 * k + p(H.x(i));
    return H;
}

int sturm_count(const GridHamiltonian& H, double lambda)
{
    const double e2 = H.off * H.off;
    const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, e2);
    int count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < H.diag.size(); ++i) {
        q = H.diag[i] - lambda - (i == 0 ? 0.0 : e2 / q);
        if (std::fabs(q) < pivmin)
            q = -pivmin;
        if (q < 0.0)
            ++count;
    }
    return count;
}

std::vector<double> lowest_eigenvalues(const GridHamiltonian& H, int k)
{
    if (k < 1 || k > H.N)
        throw Error("requested " + std::to_string(k) + " eigenvalues of a " + std::to_string(H.N) + "-point grid");
    const Interval g = H.gershgorin();
    std::vector<double> out;
    out.reserve(k);
    double floor_lo = g.lo;
    for (int j = 0; j < k; ++j) {
        double lo = floor_lo, hi = g.hi;
        for (int it = 0; it < 2000; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(lo), std::fabs(hi)))
                break;
            if (sturm_count(H, mid) <= j)
                lo = mid;
            else
                hi = mid;
        }
        out.push_back(0.5 * (lo + hi));
        floor_lo = lo;
    }
    return out;
}

Interval suggest_domain(const Potential& p, double e_max, double h, Interval window)
{
    const WellGeometry g = find_turning_points(p, e_max, window);
    const double width = g.width();
    const double dx = width / 400.0;
    auto extend = [&](double start, double dir) {
        double x = start;
        double exponent = 0.0;
        double prev = 0.0;
        for (int step = 0; step < 1000000; ++step) {
            const double nx = x + dir * dx;
            const double w = std::sqrt(std::max(0.0, p(nx) - e_max));
            exponent += 0.5 * (prev + w) * dx / h;
            prev = w;
            x = nx;
            const bool tall = p(x) >= e_max + 10.0 * h;
            const bool far = std::fabs(x - start) > 10.0 * width;
            if (exponent >= 40.0 && (tall || far))
                break;
        }
        return x;
    };
    return {extend(g.x_left, -1.0), extend(g.x_right, 1.0)};
}

ReferenceSpectrum reference_eigenvalues(const Potential& p, double h, Interval domain, int N, int k)
{
    ReferenceSpectrum r;
    r.coarse = lowest_eigenvalues(build_grid_hamiltonian(p, h, domain, N), k);
    r.fine = lowest_eigenvalues(build_grid_hamiltonian(p, h, domain, 2 * N + 1), k);
    r.extrapolated.resize(k);
    for (int i = 0; i < k; ++i) {
        r.extrapolated[i] = (4.0 * r.fine[i] - r.coarse[i]) / 3.0;
        r.max_correction = std::max(r.max_correction, std::fabs(r.extrapolated[i] - r.fine[i]));
    }
    return r;
}

SpectrumReport compare_spectra(const Potential& p, double h, Interval energies, int order, Interval window,
                               const ReferenceOptions& opt)
{
    SpectrumReport rep;
    rep.h = h;
    rep.order = order;
    rep.window = energies;
    rep.N = opt.N;
    if (energies.empty())
        return rep;
    const auto levels = enumerate_levels(p, energies, h, order, window);
    rep.count_bs = static_cast<int>(levels.size());
    rep.domain = opt.domain ? *opt.domain : suggest_domain(p, energies.hi, h, window);

    const GridHamiltonian fine = build_grid_hamiltonian(p, h, rep.domain, 2 * opt.N + 1);
    int k = sturm_count(fine, energies.hi) + 1;
    for (const auto& lv : levels)
        k = std::max(k, lv.n + 1);
    k = std::min(k, opt.N);
    const auto ref = reference_eigenvalues(p, h, rep.domain, opt.N, k);
    for (double e : ref.extrapolated)
        if (e >= energies.lo && e <= energies.hi)
            ++rep.count_ref;

    double sum = 0.0;
    for (const auto& lv : levels) {
        if (lv.n >= k)
            continue;
        LevelPair pr;
        pr.n = lv.n;
        pr.E_bs = lv.E;
        pr.E_ref = ref.extrapolated[lv.n];
        pr.error = pr.E_bs - pr.E_ref;
        rep.max_error = std::max(rep.max_error, std::fabs(pr.error));
        sum += std::fabs(pr.error);
        rep.pairs.push_back(pr);
    }
    if (!rep.pairs.empty())
        rep.mean_error = sum / rep.pairs.size();
    const int diff = std::abs(rep.count_bs - rep.count_ref);
    if (diff > 1)
        throw NumericError("level count mismatch: " + std::to_string(rep.count_bs) + " semiclassical vs " +
                           std::to_string(rep.count_ref) + " reference");
    if (diff == 1) {
        rep.count_mismatch = true;
        rep.warning = "level count differs by one (" + std::to_string(rep.count_bs) + " semiclassical, " +
                      std::to_string(rep.count_ref) + " reference)";
    }
    return rep;
}

SpectrumReport compare_spectra(const Potential& p, double h, Interval energies, int order,
                               const ReferenceOptions& opt)
{
    return compare_spectra(p, h, energies, order, search_window(p), opt);
}

OrderFit fit_order(const std::vector<double>& hs, const std::vector<double>& errors)
{
    if (hs.size() != errors.size() || hs.size() < 2)
        throw Error("order fit needs at least two (h, error) pairs");
    const std::size_t n = hs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(hs[i] > 0.0) || !(std::fabs(errors[i]) > 0.0))
            throw NumericError("order fit needs positive h and nonzero errors");
        lx[i] = std::log(hs[i]);
        ly[i] = std::log(std::fabs(errors[i]));
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    OrderFit f;
    const double den = n * sxx - sx * sx;
    f.order = (n * sxy - sx * sy) / den;
    f.log_constant = (sy - f.order * sx) / n;
    for (std::size_t i = 1; i < n; ++i)
        f.pairwise.push_back((ly[i] - ly[i - 1]) / (lx[i] - lx[i - 1]));
    return f;
}

std::vector<SweepPoint> level_error_sweep(const Potential& p, int n, const std::vector<double>& hs, int order,
                                          Interval window, const ReferenceOptions& opt)
{
    const WellMinimum wm = well_minimum(p, window);
    std::vector<SweepPoint> out;
    for (double h : hs) {
        // Grow the energy window until it holds level n.
        double top = wm.v + 1.0;
        for (int it = 0; it < 60; ++it) {
            if (semiclassical_action(p, top, h, 1, window) >= 2.0 * std::numbers::pi * h * (n + 1))
                break;
            top = wm.v + 2.0 * (top - wm.v);
        }
        const auto levels = enumerate_levels(p, Interval{wm.v, top}, h, order, window);
        const auto it = std::find_if(levels.begin(), levels.end(), [&](const BsLevel& l) { return l.n == n; });
        if (it == levels.end())
            throw NumericError("level " + std::to_string(n) + " not found at h = " + std::to_string(h));
        const Interval domain = opt.domain ? *opt.domain : suggest_domain(p, it->E, h, window);
        const auto ref = reference_eigenvalues(p, h, domain, opt.N, n + 1);
        out.push_back({h, it->E - ref.extrapolated[n]});
    }
    return out;
}

} // namespace bsq
