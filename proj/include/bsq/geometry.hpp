#pragma once

#include "bsq/interval.hpp"
#include "bsq/potential.hpp"

#include <optional>

namespace bsq {

// Search interval used when a caller does not pass one explicitly.
Interval search_window(const Potential& p);

struct WellMinimum
{
    double x = 0.0;
    double v = 0.0;
};

// Global minimum of V on the window (1024-point scan, golden-section and
// Newton polish on V').
WellMinimum well_minimum(const Potential& p, Interval window);

struct WellGeometry
{
    double E = 0.0;
    double x_left = 0.0;   // V'(x_left) < 0
    double x_right = 0.0;  // V'(x_right) > 0
    Interval bracket_left;
    Interval bracket_right;
    double residual_left = 0.0;   // |V(x_left) - E|
    double residual_right = 0.0;
    double slope_left = 0.0;      // V'(x_left)
    double slope_right = 0.0;

    double width() const { return x_right - x_left; }
    bool inside(double x) const { return x > x_left && x < x_right; }
};

inline constexpr int kScanPoints = 1024;
inline constexpr double kDegenerateSlope = 1e-8;

// Throws GeometryError when {V <= E} has no component, more than one
// component, touches the window edge, or a turning point is degenerate.
WellGeometry find_turning_points(const Potential& p, double E, Interval window);
WellGeometry find_turning_points(const Potential& p, double E);

struct CurveFrame
{
    double x = 0.0;
    double xi = 0.0;     // sqrt(E - V(x))
    double alpha = 0.0;  // V'(x)
    // Undefined where alpha == 0.
    std::optional<double> psi2;     // 2 xi / alpha
    std::optional<double> alpha_p;  // -psi2 V''(x)
    std::optional<double> theta0;   // alpha_p / (2 alpha)
};

// Throws GeometryError when x is not strictly inside the well.
CurveFrame curve_frame(const Potential& p, const WellGeometry& g, double x);

// Root of V(x) = level inside `bracket` where V - level changes sign, by
// safeguarded Newton to 1e-13 relative.
double solve_level(const Potential& p, double level, Interval bracket);

} // namespace bsq
