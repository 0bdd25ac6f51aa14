#pragma once

#include "bsq/bs_solver.hpp"
#include "bsq/interval.hpp"
#include "bsq/potential.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bsq {

// Three-point discretization of (hD)^2 + V on the interior nodes of a uniform
// grid with Dirichlet ends.
struct GridHamiltonian
{
    Interval domain;
    int N = 0;
    double delta = 0.0;
    double h = 0.0;
    std::vector<double> diag;
    double off = 0.0;

    double x(int i) const { return domain.lo + delta * (i + 1); }
    Interval gershgorin() const;
};

GridHamiltonian build_grid_hamiltonian(const Potential& p, double h, Interval domain, int N);

// Number of eigenvalues strictly below lambda.
int sturm_count(const GridHamiltonian& H, double lambda);

// The k lowest eigenvalues in ascending order, bisected to machine resolution.
std::vector<double> lowest_eigenvalues(const GridHamiltonian& H, int k);

// Dirichlet box wide enough that states up to e_max are not felt by the walls.
Interval suggest_domain(const Potential& p, double e_max, double h, Interval window);

struct ReferenceSpectrum
{
    std::vector<double> coarse;        // grid N
    std::vector<double> fine;          // grid 2N + 1 (spacing halved)
    std::vector<double> extrapolated;  // (4 fine - coarse) / 3
    double max_correction = 0.0;       // max |extrapolated - fine|
};

ReferenceSpectrum reference_eigenvalues(const Potential& p, double h, Interval domain, int N, int k);

struct ReferenceOptions
{
    int N = 4000;
    std::optional<Interval> domain;
};

struct LevelPair
{
    int n = 0;
    double E_bs = 0.0;
    double E_ref = 0.0;
    double error = 0.0;  // E_bs - E_ref
};

struct SpectrumReport
{
    double h = 0.0;
    int order = 2;
    Interval window;
    Interval domain;
    int N = 0;
    std::vector<LevelPair> pairs;
    double max_error = 0.0;
    double mean_error = 0.0;
    int count_bs = 0;
    int count_ref = 0;
    bool count_mismatch = false;
    std::string warning;
};

// BS levels against reference eigenvalues of the same index. A count
// difference of one is reported; more throws NumericError.
SpectrumReport compare_spectra(const Potential& p, double h, Interval energies, int order, Interval window,
                               const ReferenceOptions& opt = {});
SpectrumReport compare_spectra(const Potential& p, double h, Interval energies, int order,
                               const ReferenceOptions& opt = {});

struct OrderFit
{
    double order = 0.0;
    double log_constant = 0.0;
    std::vector<double> pairwise;  // slopes between consecutive points
};

// Least-squares slope of log|err| against log h.
OrderFit fit_order(const std::vector<double>& hs, const std::vector<double>& errors);

struct SweepPoint
{
    double h = 0.0;
    double error = 0.0;
};

// |E_n^BS(h) - E_n^ref(h)| for one quantum number over a list of h.
std::vector<SweepPoint> level_error_sweep(const Potential& p, int n, const std::vector<double>& hs, int order,
                                          Interval window, const ReferenceOptions& opt = {});

} // namespace bsq
