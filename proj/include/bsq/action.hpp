#pragma once

#include "bsq/geometry.hpp"
#include "bsq/potential.hpp"
#include "bsq/quadrature.hpp"

namespace bsq {

struct ActionData
{
    double E = 0.0;
    double S0 = 0.0;
    double T = 0.0;
    double J = 0.0;   // loop integral of V'' dt
    double S2 = 0.0;  // (1/12) dJ/dE
    double S0_error = 0.0;
    double T_error = 0.0;
    double J_error = 0.0;
    double S2_error = 0.0;
};

// Loop integrals over [x_left, x_right] with the sine substitution. Each
// throws NumericError when the quadrature misses 1e-10 relative accuracy.
QuadResult<double> action_s0(const Potential& p, const WellGeometry& g);
QuadResult<double> period_t(const Potential& p, const WellGeometry& g);
QuadResult<double> loop_v2(const Potential& p, const WellGeometry& g);

struct S2Result
{
    double value = 0.0;
    double error = 0.0;  // difference of the last two Richardson estimates
    double step = 0.0;   // final dE
    int halvings = 0;
};

// (1/12) dJ/dE by central differences with Richardson refinement. dE <= 0
// selects max(1e-4, 1e-3|E|); the step is clipped to half the distance to the
// well bottom and halved until two estimates agree to 1e-6.
S2Result correction_s2(const Potential& p, double E, double dE, Interval window);
S2Result correction_s2(const Potential& p, double E, double dE = 0.0);

ActionData action_data(const Potential& p, double E, Interval window);
ActionData action_data(const Potential& p, double E);

// T1 at x, from the curve frame. Throws GeometryError where V'(x) = 0.
double t1_integrand(const Potential& p, const WellGeometry& g, double x);
double t1_integrand(const Potential& p, double E, double x);

struct D1Result
{
    double value = 0.0;        // integration-by-parts form with boundary terms
    double value_direct = 0.0; // direct quadrature of the transport integral
    double discrepancy = 0.0;
    double re_d1 = 0.0;
};

// sqrt(2) Im D1 along the right-wall arc zeta in [0, xi_hi].
D1Result im_d1(const Potential& p, const WellGeometry& g, double xi_hi);
D1Result im_d1(const Potential& p, double E, double xi_hi, Interval window);
D1Result im_d1(const Potential& p, double E, double xi_hi);

struct LoopT1Result
{
    double value = 0.0;
    double discrepancy = 0.0;  // change when the contour offset is halved
};

// Closed-loop integral of T1 d(xi) on gamma_E, evaluated on a complex contour
// that passes above the interior critical points of V.
LoopT1Result loop_t1(const Potential& p, const WellGeometry& g);

} // namespace bsq
