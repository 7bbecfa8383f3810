#pragma once

#include <cstdint>
#include <string>

#include "lab/matrix.hpp"
#include "lab/rng.hpp"

namespace lab {

// Invalid ensemble recipes and malformed experiment configs.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Zero-mean, unit-variance scalar entry laws. Rademacher, gaussian and the
// symmetric uniform are sub-Gaussian; centered Bernoulli(q) has all moments
// finite (bounded) for q in (0,1).
enum class LawKind { Rademacher, StandardGaussian, UniformSym, BernoulliCentered };

struct EntryLaw {
    LawKind kind = LawKind::Rademacher;
    double q = 0.5;  // only used by BernoulliCentered

    static EntryLaw parse(const std::string& name);
    std::string name() const;

    // Draws one variate. Consumes at most two u64 draws from the stream.
    double sample(Philox& rng) const;
};

enum class EnsembleKind { SparseProduct, ErAdjacency, GinibreReal, GinibreComplex };

std::string ensemble_kind_name(EnsembleKind k);
EnsembleKind parse_ensemble_kind(const std::string& name);

// Recipe for one random matrix draw. Identical spec (plus trial index) gives a
// bit-identical matrix; the trial substream does not depend on how many other
// trials were generated.
struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::SparseProduct;
    int n = 0;
    double p = 1.0;            // ignored by ginibre_*
    EntryLaw entry_law;        // ignored by er_adjacency
    std::uint64_t seed = 0;

    void validate() const;     // throws SpecError
    std::string to_json_string() const;
    static EnsembleSpec from_json_string(const std::string& text);
};

// Entry (i,j) = xi_ij * delta_ij with delta ~ Ber(p) i.i.d.
MatrixC sample_sparse_matrix(const EnsembleSpec& spec, std::uint64_t trial = 0);

// i.i.d. Gaussian entries with variance 1 (complex: N(0,1/2) parts).
MatrixC sample_ginibre(const EnsembleSpec& spec, std::uint64_t trial = 0);

// 0/1 matrix, zero diagonal, off-diagonal i.i.d. Ber(p).
MatrixC sample_er_adjacency(const EnsembleSpec& spec, std::uint64_t trial = 0);

// Dispatch on spec.kind.
MatrixC sample_matrix(const EnsembleSpec& spec, std::uint64_t trial = 0);

// The normalization each ensemble's spectral theory uses: sqrt(np) for sparse
// products, sqrt(np(1-p)) for ER adjacency, sqrt(n) for Ginibre.
double ensemble_scale(const EnsembleSpec& spec);

// A/scale - w*I.
MatrixC shifted(const MatrixC& a, cplx w, double scale);

// Number of columns that are exactly zero.
int column_zero_census(const MatrixC& a);

}  // namespace lab
