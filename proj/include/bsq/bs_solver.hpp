#pragma once

#include "bsq/action.hpp"
#include "bsq/interval.hpp"
#include "bsq/potential.hpp"

#include <vector>

namespace bsq {

// S0(E) - pi h, minus h^2 * correction_s2 for order 2.
double semiclassical_action(const Potential& p, double E, double h, int order, Interval window);
double semiclassical_action(const Potential& p, double E, double h, int order);

struct BsLevel
{
    int n = 0;
    double E = 0.0;
    double h = 0.0;
    int order = 2;
    double residual = 0.0;  // |S_h(E) - 2 pi n h|
    int iterations = 0;
};

struct LevelOptions
{
    int grid_points = 65;  // bracketing grid over the energy window
    int max_iterations = 100;
};

// Every level n >= 0 with 2 pi n h inside [S_h(E-), S_h(E+)]. The window's
// lower end is lifted off the well bottom so stencils stay inside the well.
// Throws NumericError if S_h is not increasing on the bracketing grid.
std::vector<BsLevel> enumerate_levels(const Potential& p, Interval energies, double h, int order,
                                      Interval window, const LevelOptions& opt = {});
std::vector<BsLevel> enumerate_levels(const Potential& p, Interval energies, double h, int order);

struct GramValue
{
    double E = 0.0;
    double h = 0.0;
    double value = 0.0;     // -cos^2(argument)
    double argument = 0.0;  // (S0 - h^2 S2) / (2h)
};

GramValue gram_determinant(const Potential& p, double E, double h, Interval window);
GramValue gram_determinant(const Potential& p, double E, double h);

// D on `points` equally spaced energies covering `energies`.
std::vector<GramValue> gram_scan(const Potential& p, Interval energies, double h, int points, Interval window);

// Zeros of D located from local maxima of a grid scan (max > -1/4), refined
// by bisection on the sign of cos(argument).
std::vector<double> gram_zeros(const Potential& p, Interval energies, double h, int points, Interval window);

struct ActionAngleReport
{
    double E = 0.0;
    double tau = 0.0;          // S0 / 2 pi
    double dtau_dE = 0.0;      // T / 2 pi
    double f0_prime = 0.0;     // derivative of the inverse of tau at tau(E)
    double f0_second = 0.0;
    double inverse_check = 0.0;  // f0' * dtau/dE, equal to 1
    double f1 = 0.0;           // f0' / 2
    double implied_s1 = 0.0;   // -2 pi f1 / f0'
    double implied_s2 = 0.0;   // from the order-h^2 normal-form coefficient
};

ActionAngleReport action_angle_check(const Potential& p, double E, Interval window);
ActionAngleReport action_angle_check(const Potential& p, double E);

} // namespace bsq
