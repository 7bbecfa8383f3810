#pragma once

#include <array>
#include <span>
#include <vector>

#include "lab/matrix.hpp"

namespace lab {

// Threshold shape for one LCD functional:
//   dist(. , Z^m) < thresh_coeff * L * sqrt(log1(||.||_2 / (norm_divisor * L)))
// where log1(y) = log(y) * [y >= e].
struct LcdFunctionalParams {
    double thresh_coeff;
    double norm_divisor;
};

struct LcdParams {
    double L = 1.0;
    double delta0 = 0.01;
    LcdFunctionalParams d1{32.0, 64.0};      // 2^5, 2^6
    LcdFunctionalParams d1_hat{1.0, 256.0};  // 1, 2^8
    LcdFunctionalParams d2{1.0, 256.0};      // 1, 2^8
    double compl_coeff = 4.0;                // threshold 4L/D2 * sqrt(log1(Delta/2^7 L))
    double compl_divisor = 128.0;            // 2^7
    double cap = 2000.0;
    double grid_step = 1e-3;
    int angle_count = 720;                   // polar scan step pi/720
    bool angle_refine = true;                // local search between grid angles

    void validate() const;
    // L = (delta0 * p)^(-1/2) with the powers-of-two threshold constants.
    static LcdParams paper(double p, double delta0 = 0.01);
    // Small constants that keep the threshold in the nondegenerate regime at
    // toy sizes; used for oracle comparisons.
    static LcdParams scaled_test();
};

struct LcdEstimate {
    double value = 0.0;
    bool censored = false;               // value == cap means ">= cap"
    std::array<double, 2> witness{0.0, 0.0};  // theta (scalar stored as {t,0})
    double residual = 0.0;               // dist(V^T theta, Z^m) at witness
    double threshold_at_witness = 0.0;
};

// sqrt(det(V V^T)) for V = (x^T; y^T), computed as
// sqrt(||x||^2 ||y||^2 - <x,y>^2) with round-off clamped at zero.
double decorrelation(std::span<const cplx> z);

// tau in [0, 2pi) with z = e^{i tau}(w1 + i w2), w1 ⊥ w2, ||w1|| >= ||w2||.
struct CanonicalRotation {
    double tau = 0.0;
    std::vector<double> w1, w2;
};
CanonicalRotation canonical_rotation(std::span<const cplx> z);

// Index set of the n-M smallest-modulus coordinates (ties to lower index),
// plus the compacted subvector.
struct SmallSplit {
    std::vector<cplx> z_small;
    std::vector<int> indices;
};
SmallSplit small_split(std::span<const cplx> z, int m_large);

// Distance to Sparse(m) at most delta (z unit norm within 1e-8).
bool is_compressible(std::span<const cplx> z, int m, double delta);

// ||z_[m+1:n]||_2 <= alpha sqrt(m) ||z_[m+1:n]||_inf.
bool is_dominated(std::span<const cplx> z, int m, double alpha);

LcdEstimate lcd_d1(std::span<const double> x, const LcdParams& params);
LcdEstimate lcd_d1_hat(std::span<const double> x, const LcdParams& params);
LcdEstimate lcd_d2(std::span<const cplx> z, const LcdParams& params);

struct DeltaEstimate {
    LcdEstimate est;          // at the tightest radius factor (k = 10)
    double bracket_lo = 0.0;  // extremes across k = 1..10
    double bracket_hi = 0.0;
};

// Approximates Delta(V): minimal ||V^T theta|| over qualifying theta with
// ||theta|| <= (1 + 2^-k) D2, reported at k = 10 with the bracket across k.
DeltaEstimate delta_aux(std::span<const cplx> z, const LcdParams& params);

enum class VectorClass { GenuinelyComplex, EssentiallyReal };

struct VectorTaxonomy {
    bool compressible = false;
    int comp_m = 0;
    double comp_delta = 0.0;
    bool dominated = false;
    int dom_m = 0;
    double dom_alpha = 0.0;
    VectorClass cls = VectorClass::EssentiallyReal;
    double d_small = 0.0;
    LcdEstimate lcd2_small;
    DeltaEstimate delta_small;
    double class_threshold_rhs = 0.0;
    double inf_norm_ratio = 0.0;  // ||x_small||_inf / ||x_small||_2 after rotation
    // pieces of the rotated normal form z_small/||z_small|| = phi + i psi
    std::vector<double> phi, psi;
};

VectorTaxonomy classify(std::span<const cplx> z, int m_large, const LcdParams& params,
                        double comp_delta = 0.1, double dom_alpha = 0.5);

}  // namespace lab
