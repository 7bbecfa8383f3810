#pragma once

#include <optional>
#include <vector>

#include "lab/ensembles.hpp"
#include "lab/matrix.hpp"

namespace lab {

// Per-draw spectral record for one shifted, scaled matrix.
struct SpectralSample {
    cplx w;
    std::vector<double> singular_values;  // descending
    std::optional<std::vector<cplx>> eigenvalues;
    double frobenius_sq = 0.0;
    EnsembleSpec ensemble;

    // Checks ordering, nonnegativity and sum s_i^2 = ||M||_F^2 (1e-8 rel).
    void validate() const;
};

// The multiset {+s_i} u {-s_i}, each atom carrying weight 1/(2n).
struct SymmetrizedMeasure {
    std::vector<double> atoms;
    double weight() const { return atoms.empty() ? 0.0 : 1.0 / atoms.size(); }
};

SymmetrizedMeasure symmetrized_sv_measure(const SpectralSample& sample);
SymmetrizedMeasure symmetrized_measure_from_sv(const std::vector<double>& sv);

// sum_i weight / (atom_i - zeta), Im zeta > 0 required.
cplx stieltjes(const SymmetrizedMeasure& m, cplx zeta);

struct LogPotential {
    double value = 0.0;
    bool floored = false;  // hit the 1e-300 determinant floor
};

// (1/n) log|det(A/scale - wI)|, floored at log(1e-300) instead of -inf.
LogPotential log_potential(const MatrixC& a, cplx w, double scale);

struct GridSpec {
    double h = 0.1;
    double r_max = 1.5;
};

// Square-lattice field of density estimates from the discrete Laplacian of the
// log-potential. Boundary ring uses one-sided differences and is excluded
// from the mass statistics; negative values are clamped with the clamped mass
// recorded.
struct DensityGrid {
    GridSpec spec;
    int side = 0;                     // nodes per axis
    std::vector<cplx> nodes;          // row-major over the lattice
    std::vector<double> values;       // clamped density estimates
    std::vector<double> potential;    // log-potential U at each node
    std::vector<std::uint8_t> boundary;
    std::vector<std::uint8_t> near_real_axis;  // |Im w| < 0.05
    double mass = 0.0;                // sum density*h^2, interior nodes
    double clamped_mass = 0.0;        // negative mass removed by clamping
    int floored_nodes = 0;
};

DensityGrid girko_density_grid(const MatrixC& a, double scale, const GridSpec& grid);

// sup over r in [0,1] of |F(r) - r^2| for the empirical CDF F of |lambda_i|.
double radial_ks_statistic(const std::vector<cplx>& eigenvalues);

// Edge of the support of the limiting symmetrized singular-value measure.
double lambda_plus(cplx w);

struct LogTailMass {
    double value = 0.0;
    int zero_atoms_excluded = 0;
};

// sum over atoms with 0 < |atom| < tau of weight * |log|atom||.
LogTailMass log_tail_mass(const SymmetrizedMeasure& m, double tau);

// | mean_t m_n(zeta) - mean_t m_G(zeta) | over the given number of trials.
double stieltjes_compare(const EnsembleSpec& spec_a, const EnsembleSpec& spec_b, cplx w,
                         cplx zeta, int trials);

// Singular-value measure of one shifted scaled draw (spectrum engine: Gram +
// Hermitian eigensolver).
std::vector<double> shifted_singular_spectrum(const EnsembleSpec& spec, std::uint64_t trial,
                                              cplx w);

// Full per-draw record (validated) for one shifted scaled draw.
SpectralSample make_spectral_sample(const EnsembleSpec& spec, std::uint64_t trial, cplx w,
                                    bool with_eigenvalues = false);

}  // namespace lab
