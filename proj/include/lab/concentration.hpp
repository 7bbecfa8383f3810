#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lab/ensembles.hpp"

namespace lab {

struct LevyEstimate {
    double epsilon = 0.0;
    double value = 0.0;  // in [1/samples, 1]
    cplx mode_center;
    int samples = 0;
};

// sup_u P(|Z - u| <= eps) approximated over centers on the sample points
// themselves; error at most one order-statistic spacing.
LevyEstimate levy_concentration(std::span<const cplx> samples, double eps);

struct SmallBallRow {
    int n = 0;
    double p = 0.0;
    std::string law;
    int trials = 0;
    double epsilon = 0.0;
    double radius = 0.0;  // eps * rho_hat * sqrt(p)
    double estimate = 0.0;
    double berry_esseen_bound = 0.0;  // 5 (eps + 1/sqrt(pn)), calibration constant
};

// Draw <a, v> for sparse columns a = (xi_i delta_i) and return the Levy
// concentration at radius eps * rho_hat * sqrt(p).
SmallBallRow small_ball_experiment(std::span<const cplx> v, int n, double p, EntryLaw law,
                                   int trials, double eps, double rho_hat, std::uint64_t seed);

enum class SubspaceKind { GaussianReal, GaussianComplex, ColumnSpan, Canonical };

struct SubspaceDistanceRow {
    int n = 0, d = 0;
    double p = 0.0;
    int trials = 0;
    SubspaceKind kind = SubspaceKind::GaussianReal;
    double mean_ratio = 0.0;        // mean of dist^2 / (p (n-d))
    double percentile1_ratio = 0.0; // 1st percentile of dist / sqrt(p (n-d))
};

// Distance of a sparse random vector to a per-trial random d-dimensional
// subspace. E dist^2 = p (n - d) exactly for any fixed subspace.
SubspaceDistanceRow subspace_distance_experiment(int n, int d, double p, EntryLaw law,
                                                 int trials, std::uint64_t seed,
                                                 SubspaceKind kind = SubspaceKind::GaussianReal);

// dist(a, span of the columns of q); q must have orthonormal columns.
double distance_to_subspace(std::span<const cplx> a, const MatrixC& q);

struct ZeroColumnRow {
    int n = 0;
    double p = 0.0;
    int trials = 0;
    double fraction_with_zero_column = 0.0;
    double mean_census = 0.0;
};

// At p = log n / n (or the override), the fraction of trials with at least one
// zero column. Column nonzero counts are simulated directly by geometric
// skips, never materializing the n x n matrix.
ZeroColumnRow zero_column_barrier_experiment(int n, int trials, std::uint64_t seed,
                                             std::optional<double> p_override = std::nullopt);

}  // namespace lab
