#pragma once

#include "bsq/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

namespace bsq {

// Gauss-Kronrod 7/15 pair on (-1, 1) plus the adaptive stopping rules.
struct QuadRule
{
    static constexpr int kronrod_points = 15;
    // Nonnegative half of the symmetric Kronrod abscissae; index 7 is the centre.
    std::array<double, 8> nodes{};
    std::array<double, 8> kronrod_weights{};
    std::array<double, 4> gauss_weights{};  // on nodes 1, 3, 5, 7
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int max_intervals = 4000;

    static QuadRule standard();
};

inline QuadRule QuadRule::standard()
{
    QuadRule q;
    q.nodes = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
               0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
               0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
               0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    q.kronrod_weights = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                         0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                         0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                         0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    q.gauss_weights = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    return q;
}

template <class T>
struct QuadResult
{
    T value{};
    double error = 0.0;
    int evaluations = 0;
    int intervals = 0;
    bool converged = true;
};

namespace detail {

template <class T>
bool finite_value(const T& v)
{
    if constexpr (std::is_same_v<T, double>)
        return std::isfinite(v);
    else
        return std::isfinite(v.real()) && std::isfinite(v.imag());
}

template <class T>
struct Segment
{
    double a, b;
    T value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gk15(F& f, double a, double b, const QuadRule& q, int& evals)
{
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    std::array<T, 15> fv{};
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - hw * q.nodes[i]);
        fv[14 - i] = f(c + hw * q.nodes[i]);
    }
    fv[7] = f(c);
    evals += 15;
    for (const auto& v : fv)
        if (!finite_value(v))
            throw NumericError("non-finite integrand in [" + std::to_string(a) + ", " + std::to_string(b) + "]");

    T k = q.kronrod_weights[7] * fv[7];
    T g = q.gauss_weights[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        const T pair = fv[i] + fv[14 - i];
        k += q.kronrod_weights[i] * pair;
        if (i % 2 == 1)
            g += q.gauss_weights[i / 2] * pair;
    }
    const T mean = 0.5 * k;
    double resasc = q.kronrod_weights[7] * std::abs(fv[7] - mean);
    for (int i = 0; i < 7; ++i)
        resasc += q.kronrod_weights[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
    resasc *= std::abs(hw);

    double err = std::abs((k - g) * hw);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return {a, b, k * hw, err};
}

} // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b]. Bisects the segment with
// the largest error estimate until the total estimate meets the tolerances.
// Hitting max_intervals returns the best estimate with converged = false.
template <class T, class F>
QuadResult<T> integrate(F&& f, double a, double b, const QuadRule& q = QuadRule::standard())
{
    QuadResult<T> res;
    if (a == b)
        return res;
    std::priority_queue<detail::Segment<T>> heap;
    heap.push(detail::gk15<T>(f, a, b, q, res.evaluations));
    T total = heap.top().value;
    double err = heap.top().error;
    int count = 1;
    const double min_width = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(b - a);
    while (err > std::max(q.abs_tol, q.rel_tol * std::abs(total))) {
        if (count >= q.max_intervals) {
            res.converged = false;
            break;
        }
        auto worst = heap.top();
        if (std::abs(worst.b - worst.a) < min_width) {
            res.converged = false;
            break;
        }
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::gk15<T>(f, worst.a, mid, q, res.evaluations);
        auto right = detail::gk15<T>(f, mid, worst.b, q, res.evaluations);
        heap.push(left);
        heap.push(right);
        ++count;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        if (count % 64 == 0) {
            // Re-sum so rounding from the running updates cannot accumulate.
            total = T{};
            err = 0.0;
            auto copy = heap;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    res.value = total;
    res.error = err;
    res.intervals = count;
    return res;
}

// Integral of f over (lo, hi). With `singular` set the integrand may carry
// inverse square-root endpoint factors; x = mid + half*sin(theta) turns them
// into a smooth integrand in theta.
template <class F>
QuadResult<double> quad_well(F&& f, double lo, double hi, bool singular,
                             const QuadRule& q = QuadRule::standard())
{
    if (!singular)
        return integrate<double>(f, lo, hi, q);
    const double m = 0.5 * (lo + hi);
    const double r = 0.5 * (hi - lo);
    auto g = [&](double th) { return f(m + r * std::sin(th)) * (r * std::cos(th)); };
    return integrate<double>(g, -std::numbers::pi / 2, std::numbers::pi / 2, q);
}

} // namespace bsq
