#include "lab/ensembles.hpp"

#include <cmath>

#include "json.hpp"

namespace lab {

namespace {

// Fixed draw budget per matrix entry so entry streams are position-independent:
// draw 0 carries the Bernoulli mask (sparse/er), draws 1-2 the value.
constexpr std::uint64_t kDrawsPerEntry = 4;

inline Philox entry_rng(const EnsembleSpec& spec, std::uint64_t trial, std::uint64_t entry_index) {
    return Philox(spec.seed, streams::id(streams::kMatrixEntries, trial),
                  entry_index * kDrawsPerEntry);
}

}  // namespace

EntryLaw EntryLaw::parse(const std::string& name) {
    if (name == "rademacher") return {LawKind::Rademacher, 0.5};
    if (name == "gaussian" || name == "standard_gaussian") return {LawKind::StandardGaussian, 0.5};
    if (name == "uniform_sym") return {LawKind::UniformSym, 0.5};
    if (name.rfind("bernoulli_centered", 0) == 0) {
        double q = 0.5;
        const auto lp = name.find('(');
        if (lp != std::string::npos) {
            const auto rp = name.find(')', lp);
            q = std::stod(name.substr(lp + 1, rp - lp - 1));
        }
        if (!(q > 0.0 && q < 1.0)) throw SpecError("bernoulli_centered: q must lie in (0,1)");
        return {LawKind::BernoulliCentered, q};
    }
    throw SpecError("unknown entry law: " + name);
}

std::string EntryLaw::name() const {
    switch (kind) {
        case LawKind::Rademacher: return "rademacher";
        case LawKind::StandardGaussian: return "standard_gaussian";
        case LawKind::UniformSym: return "uniform_sym";
        case LawKind::BernoulliCentered:
            return "bernoulli_centered(" + std::to_string(q) + ")";
    }
    return "?";
}

double EntryLaw::sample(Philox& rng) const {
    switch (kind) {
        case LawKind::Rademacher:
            return (rng.next_u64() >> 63) ? 1.0 : -1.0;
        case LawKind::StandardGaussian:
            return rng.next_gaussian();
        case LawKind::UniformSym:
            // variance of U[-a,a] is a^2/3
            return (2.0 * rng.next_uniform() - 1.0) * 1.7320508075688772935;
        case LawKind::BernoulliCentered: {
            const double s = std::sqrt(q * (1.0 - q));
            return (rng.next_uniform() < q) ? (1.0 - q) / s : -q / s;
        }
    }
    return 0.0;
}

std::string ensemble_kind_name(EnsembleKind k) {
    switch (k) {
        case EnsembleKind::SparseProduct: return "sparse_product";
        case EnsembleKind::ErAdjacency: return "er_adjacency";
        case EnsembleKind::GinibreReal: return "ginibre_real";
        case EnsembleKind::GinibreComplex: return "ginibre_complex";
    }
    return "?";
}

EnsembleKind parse_ensemble_kind(const std::string& name) {
    if (name == "sparse_product") return EnsembleKind::SparseProduct;
    if (name == "er_adjacency") return EnsembleKind::ErAdjacency;
    if (name == "ginibre_real") return EnsembleKind::GinibreReal;
    if (name == "ginibre_complex") return EnsembleKind::GinibreComplex;
    throw SpecError("unknown ensemble kind: " + name);
}

void EnsembleSpec::validate() const {
    if (n <= 0) throw SpecError("EnsembleSpec: n must be positive");
    const bool needs_p = kind == EnsembleKind::SparseProduct || kind == EnsembleKind::ErAdjacency;
    if (needs_p && !(p > 0.0 && p <= 1.0)) {
        throw SpecError("EnsembleSpec: p must lie in (0,1]");
    }
    if (entry_law.kind == LawKind::BernoulliCentered &&
        !(entry_law.q > 0.0 && entry_law.q < 1.0)) {
        throw SpecError("EnsembleSpec: bernoulli_centered q must lie in (0,1)");
    }
}

std::string EnsembleSpec::to_json_string() const {
    nlohmann::json j;
    j["kind"] = ensemble_kind_name(kind);
    j["n"] = n;
    j["p"] = p;
    j["entry_law"] = entry_law.name();
    j["seed"] = seed;
    return j.dump();
}

EnsembleSpec EnsembleSpec::from_json_string(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    EnsembleSpec s;
    s.kind = parse_ensemble_kind(j.at("kind").get<std::string>());
    s.n = j.at("n").get<int>();
    s.p = j.at("p").get<double>();
    s.entry_law = EntryLaw::parse(j.at("entry_law").get<std::string>());
    s.seed = j.at("seed").get<std::uint64_t>();
    s.validate();
    return s;
}

MatrixC sample_sparse_matrix(const EnsembleSpec& spec, std::uint64_t trial) {
    spec.validate();
    if (spec.kind != EnsembleKind::SparseProduct) {
        throw SpecError("sample_sparse_matrix: spec.kind must be sparse_product");
    }
    const int n = spec.n;
    MatrixC a(n, n);
    std::uint64_t entry = 0;
    for (int i = 0; i < n; ++i) {
        cplx* ri = a.row(i);
        for (int j = 0; j < n; ++j, ++entry) {
            Philox rng = entry_rng(spec, trial, entry);
            if (rng.next_uniform() < spec.p) {
                ri[j] = spec.entry_law.sample(rng);
            }
        }
    }
    return a;
}

MatrixC sample_ginibre(const EnsembleSpec& spec, std::uint64_t trial) {
    spec.validate();
    const bool complex_entries = spec.kind == EnsembleKind::GinibreComplex;
    if (spec.kind != EnsembleKind::GinibreReal && !complex_entries) {
        throw SpecError("sample_ginibre: spec.kind must be ginibre_real or ginibre_complex");
    }
    const int n = spec.n;
    MatrixC a(n, n);
    std::uint64_t entry = 0;
    const double inv_sqrt2 = 0.70710678118654752440;
    for (int i = 0; i < n; ++i) {
        cplx* ri = a.row(i);
        for (int j = 0; j < n; ++j, ++entry) {
            Philox rng = entry_rng(spec, trial, entry);
            if (complex_entries) {
                const auto g = rng.next_gaussian_pair();
                ri[j] = cplx(g[0] * inv_sqrt2, g[1] * inv_sqrt2);
            } else {
                ri[j] = rng.next_gaussian();
            }
        }
    }
    return a;
}

MatrixC sample_er_adjacency(const EnsembleSpec& spec, std::uint64_t trial) {
    spec.validate();
    if (spec.kind != EnsembleKind::ErAdjacency) {
        throw SpecError("sample_er_adjacency: spec.kind must be er_adjacency");
    }
    const int n = spec.n;
    MatrixC a(n, n);
    std::uint64_t entry = 0;
    for (int i = 0; i < n; ++i) {
        cplx* ri = a.row(i);
        for (int j = 0; j < n; ++j, ++entry) {
            if (i == j) continue;  // no self-loops
            Philox rng = entry_rng(spec, trial, entry);
            if (rng.next_uniform() < spec.p) ri[j] = 1.0;
        }
    }
    return a;
}

MatrixC sample_matrix(const EnsembleSpec& spec, std::uint64_t trial) {
    switch (spec.kind) {
        case EnsembleKind::SparseProduct: return sample_sparse_matrix(spec, trial);
        case EnsembleKind::ErAdjacency: return sample_er_adjacency(spec, trial);
        case EnsembleKind::GinibreReal:
        case EnsembleKind::GinibreComplex: return sample_ginibre(spec, trial);
    }
    throw SpecError("sample_matrix: unreachable kind");
}

double ensemble_scale(const EnsembleSpec& spec) {
    switch (spec.kind) {
        case EnsembleKind::SparseProduct: return std::sqrt(spec.n * spec.p);
        case EnsembleKind::ErAdjacency: return std::sqrt(spec.n * spec.p * (1.0 - spec.p));
        case EnsembleKind::GinibreReal:
        case EnsembleKind::GinibreComplex: return std::sqrt(static_cast<double>(spec.n));
    }
    return 1.0;
}

MatrixC shifted(const MatrixC& a, cplx w, double scale) {
    if (!a.square()) throw SpecError("shifted: matrix must be square");
    if (!(scale > 0.0)) throw SpecError("shifted: scale must be positive");
    MatrixC b(a.rows(), a.cols());
    const double inv = 1.0 / scale;
    for (int i = 0; i < a.rows(); ++i) {
        const cplx* ra = a.row(i);
        cplx* rb = b.row(i);
        for (int j = 0; j < a.cols(); ++j) rb[j] = ra[j] * inv;
        rb[i] -= w;
    }
    return b;
}

int column_zero_census(const MatrixC& a) {
    std::vector<char> zero(a.cols(), 1);
    for (int i = 0; i < a.rows(); ++i) {
        const cplx* ri = a.row(i);
        for (int j = 0; j < a.cols(); ++j) {
            if (ri[j] != cplx(0.0, 0.0)) zero[j] = 0;
        }
    }
    int count = 0;
    for (char z : zero) count += z;
    return count;
}

}  // namespace lab
