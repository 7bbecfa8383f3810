#pragma once

#include <vector>

#include "lab/matrix.hpp"

namespace lab {

// Iterative factorization failed to converge within its cap.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, int iterations)
        : std::runtime_error(what), iterations(iterations) {}
    int iterations;
};

// ---- LU with partial pivoting ------------------------------------------------

struct LuFactor {
    MatrixC lu;              // L (unit diag, below) and U (on/above) packed
    std::vector<int> pivot;  // row swaps applied at each step
    bool singular = false;   // a pivot fell below the floor

    // Solve (LU) x = b with the stored permutation.
    std::vector<cplx> solve(const std::vector<cplx>& b) const;
};

LuFactor lu_factor(const MatrixC& m);

// log|det M| = sum log|u_ii|; -infinity sentinel when a pivot magnitude
// drops below 1e-300.
double lu_logabsdet(const MatrixC& m);

// ---- SVD ----------------------------------------------------------------------

struct SvdResult {
    std::vector<double> values;  // descending
    MatrixC right_vectors;       // columns are right singular vectors, same order
    int sweeps = 0;
};

// One-sided Jacobi on columns; high relative accuracy on small singular
// values. Converged when a full sweep applies no rotation with relative
// Gram off-diagonal above 1e-12; cap 60 sweeps.
SvdResult jacobi_svd(const MatrixC& m);

// All min(rows, cols) singular values, descending (one-sided Jacobi).
std::vector<double> singular_values(const MatrixC& m);

// Singular values via eigenvalues of M*M through the Hermitian path
// (tridiagonalization + QL). Absolute accuracy ~ eps*||M||^2 on the squares;
// the spectrum-level engine for large n. Square input only.
std::vector<double> gram_singular_values(const MatrixC& m);

struct SingularPair {
    double value = 0.0;
    std::vector<cplx> vector;  // unit right singular vector
    bool used_fallback = false;
    int iterations = 0;
};

// Smallest singular value and attaining unit vector, by inverse iteration on
// M*M + eps*I (eps = 1e-20 * ||M||_F^2), LU-seeded; falls back to a full
// Jacobi SVD if the Rayleigh quotient stalls. Accepts square or (n-1) x n.
SingularPair smallest_singular_pair(const MatrixC& m);

// Largest singular value via Lanczos on M*M with a fixed-seed start vector.
double largest_singular_value(const MatrixC& m, int lanczos_steps = 140);

// ---- Eigenvalues ----------------------------------------------------------------

// All n eigenvalues: Householder reduction to Hessenberg form, then
// implicitly shifted QR (Wilkinson shift) with deflation at
// 1e-12*(|h_kk| + |h_k+1,k+1|). Cap 40n iterations. n <= 2048.
std::vector<cplx> eigenvalues(const MatrixC& m);

// Similarity reduction to upper Hessenberg form (same spectrum).
MatrixC hessenberg_form(const MatrixC& m);

// log|det(H - wI)| for an upper Hessenberg H in O(n^2) by structured
// elimination with pairwise pivoting. Matches lu_logabsdet on H - wI.
double hessenberg_shifted_logabsdet(const MatrixC& h, cplx w);

// [[0, M], [M*, 0]]; spectrum is {±s_i(M)}.
MatrixC hermitization(const MatrixC& m);

// All eigenvalues of a Hermitian matrix, ascending, via Householder
// tridiagonalization + implicit-shift QL. Input must be Hermitian within
// 1e-12 * max(1, max|h_ij|) entrywise.
std::vector<double> hermitian_eigenvalues(const MatrixC& h);

}  // namespace lab
