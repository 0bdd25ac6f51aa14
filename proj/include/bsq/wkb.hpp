#pragma once

#include "bsq/geometry.hpp"
#include "bsq/potential.hpp"

#include <array>
#include <complex>
#include <vector>

namespace bsq {

enum class PhaseCorrection {
    none,
    // h^2 Im D1(xi(x)) from the right-wall arc; needs V' > 0 between x and x_E.
    turning_point_arc,
    // h^2 times the finite part of the second-order spatial phase, anchored at
    // the turning point; valid across interior critical points of V.
    spatial,
};

enum class Anchor { right, left };

struct WkbOptions
{
    PhaseCorrection correction = PhaseCorrection::none;
    Anchor anchor = Anchor::right;
    double xi_min_fraction = 0.1;  // of max xi over the well
    double amplitude = 1.0;
};

// phi_+(x) = integral of xi from x_E to x, phi_- = -phi_+.
double wkb_phase(const Potential& p, const WellGeometry& g, double x, int branch);

// Two-branch quasi-mode 1/2 sum e^{+-i pi/4} e^{i S_+-/h} |xi|^{-1/2}, anchored
// at x_E (or at x'_E with the opposite Maslov phases).
class WkbState
{
public:
    WkbState(const Potential& p, const WellGeometry& g, double h, WkbOptions opt = {});

    std::complex<double> operator()(double x) const;
    std::complex<double> branch(double x, int sign) const;

    // Total phase S_+(x), including the h^2 correction.
    double phase(double x) const;
    // The h^2 coefficient of the phase at x.
    double correction(double x) const;

    double xi_min() const { return xi_min_; }
    // Inside the well, xi >= xi_min, and right of the well minimum for the arc
    // correction.
    bool admissible(double x) const;
    const WellGeometry& geometry() const { return g_; }
    const Potential& potential() const { return *p_; }
    double h() const { return h_; }
    // Change of the turning-point finite part when its keyhole radius is halved.
    double keyhole_discrepancy() const { return keyhole_discrepancy_; }

    // u (branch 0) or one branch (+1 / -1) at x + k*delta for k = -2..2, with
    // phases advanced by a fixed Gauss-Legendre rule so the samples stay
    // mutually smooth.
    std::array<std::complex<double>, 5> stencil(double x, double delta, int branch = 0) const;

private:
    const Potential* p_;
    WellGeometry g_;
    double h_;
    WkbOptions opt_;
    double xi_min_ = 0.0;
    double x_min_ = 0.0;
    double fp_anchor_ = 0.0;  // finite part from the anchor turning point to z0_
    double z0_ = 0.0;
    double keyhole_discrepancy_ = 0.0;

    void check(double x) const;
    std::complex<double> assemble(double x, double total_phase) const;
};

// u(x) anchored at x_E; the flag adds the turning-point arc correction.
std::complex<double> wkb_eval(const Potential& p, const WellGeometry& g, double h, double x, bool with_h2_correction);

// |-h^2 u'' + (V - E) u| at x by a 5-point second difference on spacing 0.01 h.
double residual_estimate(const Potential& p, const WellGeometry& g, double h, double x, WkbOptions opt = {});
double residual_estimate(const WkbState& u, double x);

// Oscillation envelope of the residual at x: u = 2 Re u_+, so the residual
// swings between +-2 |(P - E) u_+|.
double residual_envelope(const WkbState& u, double x);

struct ResidualFit
{
    std::vector<double> hs;
    std::vector<double> residuals;  // residual_envelope at x
    double order = 0.0;
};

ResidualFit residual_order(const Potential& p, const WellGeometry& g, double x, const std::vector<double>& hs,
                           WkbOptions opt = {});

// max |u_R - s u_L| / max |u_R| over admissible samples, minimized over the
// sign s; both states carry the spatial h^2 correction.
double connection_mismatch(const Potential& p, const WellGeometry& g, double h, int samples = 64);

// Mean of |u|^2 over one local oscillation period around x, times 2 xi(x).
// Equals 1 when the density follows 1/xi.
double density_ratio(const WkbState& u, double x);

} // namespace bsq
