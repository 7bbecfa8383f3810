#include "lab/concentration.hpp"

#include <algorithm>
#include <cmath>

namespace lab {

LevyEstimate levy_concentration(std::span<const cplx> samples, double eps) {
    if (samples.size() < 1000) {
        throw std::invalid_argument("levy_concentration: need at least 1000 samples");
    }
    if (!(eps > 0.0)) throw std::invalid_argument("levy_concentration: eps must be positive");
    const double eps2 = eps * eps;
    const std::size_t n = samples.size();
    std::size_t best = 0;
    cplx center = samples[0];
    // Sort by real part so each center only scans a window of width 2 eps.
    std::vector<cplx> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::size_t lo = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (s[i].real() - s[lo].real() > eps) ++lo;
        std::size_t count = 0;
        for (std::size_t j = lo; j < n && s[j].real() - s[i].real() <= eps; ++j) {
            if (std::norm(s[j] - s[i]) <= eps2) ++count;
        }
        if (count > best) {
            best = count;
            center = s[i];
        }
    }
    LevyEstimate e;
    e.epsilon = eps;
    e.value = static_cast<double>(best) / static_cast<double>(n);
    e.mode_center = center;
    e.samples = static_cast<int>(n);
    return e;
}

SmallBallRow small_ball_experiment(std::span<const cplx> v, int n, double p, EntryLaw law,
                                   int trials, double eps, double rho_hat, std::uint64_t seed) {
    if (static_cast<int>(v.size()) != n) {
        throw std::invalid_argument("small_ball_experiment: v must have length n");
    }
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("small_ball_experiment: bad p");
    std::vector<cplx> inner(trials);
    for (int t = 0; t < trials; ++t) {
        Philox rng(seed, streams::id(streams::kScalars, static_cast<std::uint64_t>(t)));
        cplx s = 0.0;
        for (int i = 0; i < n; ++i) {
            if (rng.next_uniform() < p) {
                s += law.sample(rng) * v[i];
            } else {
                // keep the draw budget per coordinate fixed
                (void)law.sample(rng);
            }
        }
        inner[t] = s;
    }
    SmallBallRow row;
    row.n = n;
    row.p = p;
    row.law = law.name();
    row.trials = trials;
    row.epsilon = eps;
    row.radius = eps * rho_hat * std::sqrt(p);
    row.estimate = levy_concentration(inner, row.radius).value;
    row.berry_esseen_bound = 5.0 * (eps + 1.0 / std::sqrt(p * n));
    return row;
}

double distance_to_subspace(std::span<const cplx> a, const MatrixC& q) {
    if (static_cast<int>(a.size()) != q.rows()) {
        throw std::invalid_argument("distance_to_subspace: dimension mismatch");
    }
    // dist^2 = ||a||^2 - ||Q* a||^2 for orthonormal Q
    std::vector<cplx> proj(q.cols(), 0.0);
    for (int i = 0; i < q.rows(); ++i) {
        const cplx ai = a[i];
        if (ai == cplx(0.0, 0.0)) continue;
        for (int j = 0; j < q.cols(); ++j) proj[j] += std::conj(q(i, j)) * ai;
    }
    double a2 = 0.0, p2 = 0.0;
    for (const cplx& x : a) a2 += std::norm(x);
    for (const cplx& x : proj) p2 += std::norm(x);
    return std::sqrt(std::max(0.0, a2 - p2));
}

namespace {

// Modified Gram-Schmidt, in place.
void orthonormalize(MatrixC& q) {
    const int n = q.rows(), d = q.cols();
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < j; ++k) {
            cplx dot = 0.0;
            for (int i = 0; i < n; ++i) dot += std::conj(q(i, k)) * q(i, j);
            if (dot == cplx(0.0, 0.0)) continue;
            for (int i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
        }
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) nrm += std::norm(q(i, j));
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) throw std::runtime_error("orthonormalize: rank deficient frame");
        for (int i = 0; i < n; ++i) q(i, j) /= nrm;
    }
}

MatrixC sample_frame(int n, int d, SubspaceKind kind, double p, EntryLaw law,
                     std::uint64_t seed, std::uint64_t trial) {
    MatrixC q(n, d);
    Philox rng(seed, streams::id(streams::kSubspaceFrame, trial));
    switch (kind) {
        case SubspaceKind::GaussianReal:
            for (int j = 0; j < d; ++j) {
                for (int i = 0; i < n; ++i) q(i, j) = rng.next_gaussian();
            }
            break;
        case SubspaceKind::GaussianComplex:
            for (int j = 0; j < d; ++j) {
                for (int i = 0; i < n; ++i) {
                    const auto g = rng.next_gaussian_pair();
                    q(i, j) = cplx(g[0], g[1]);
                }
            }
            break;
        case SubspaceKind::ColumnSpan:
            // d independent sparse columns; resample any zero column
            for (int j = 0; j < d; ++j) {
                bool nonzero = false;
                while (!nonzero) {
                    for (int i = 0; i < n; ++i) {
                        if (rng.next_uniform() < p) {
                            q(i, j) = law.sample(rng);
                            nonzero = true;
                        } else {
                            q(i, j) = 0.0;
                        }
                    }
                }
            }
            break;
        case SubspaceKind::Canonical:
            for (int j = 0; j < d; ++j) q(j, j) = 1.0;
            return q;
    }
    orthonormalize(q);
    return q;
}

}  // namespace

SubspaceDistanceRow subspace_distance_experiment(int n, int d, double p, EntryLaw law,
                                                 int trials, std::uint64_t seed,
                                                 SubspaceKind kind) {
    if (!(d >= 1 && d <= n - 1)) {
        throw std::invalid_argument("subspace_distance_experiment: need 1 <= d <= n-1");
    }
    std::vector<double> ratios(trials);
    double mean = 0.0;
    const double denom = p * (n - d);
    for (int t = 0; t < trials; ++t) {
        const MatrixC q = sample_frame(n, d, kind, p, law, seed, t);
        Philox rng(seed, streams::id(streams::kMatrixEntries, t));
        std::vector<cplx> a(n);
        for (int i = 0; i < n; ++i) {
            if (rng.next_uniform() < p) {
                a[i] = law.sample(rng);
            } else {
                (void)law.sample(rng);
            }
        }
        const double dist = distance_to_subspace(a, q);
        mean += dist * dist / denom;
        ratios[t] = dist / std::sqrt(denom);
    }
    std::sort(ratios.begin(), ratios.end());
    SubspaceDistanceRow row;
    row.n = n;
    row.d = d;
    row.p = p;
    row.trials = trials;
    row.kind = kind;
    row.mean_ratio = mean / trials;
    row.percentile1_ratio = ratios[static_cast<std::size_t>(0.01 * trials)];
    return row;
}

ZeroColumnRow zero_column_barrier_experiment(int n, int trials, std::uint64_t seed,
                                             std::optional<double> p_override) {
    if (n < 1000) throw std::invalid_argument("zero_column_barrier_experiment: n >= 1000");
    const double p = p_override.value_or(std::log(static_cast<double>(n)) / n);
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("zero_column_barrier_experiment: p out of range");
    }
    const double log1mp = std::log1p(-p);
    int with_zero = 0;
    long total_census = 0;
    for (int t = 0; t < trials; ++t) {
        Philox rng(seed, streams::id(streams::kScalars, t));
        int census = 0;
        for (int col = 0; col < n; ++col) {
            // geometric skips over the n Bernoulli slots of this column
            int pos = -1;
            int nonzeros = 0;
            while (true) {
                const double u = rng.next_open_uniform();
                pos += 1 + static_cast<int>(std::floor(std::log(u) / log1mp));
                if (pos >= n) break;
                ++nonzeros;
            }
            if (nonzeros == 0) ++census;
        }
        if (census > 0) ++with_zero;
        total_census += census;
    }
    ZeroColumnRow row;
    row.n = n;
    row.p = p;
    row.trials = trials;
    row.fraction_with_zero_column = static_cast<double>(with_zero) / trials;
    row.mean_census = static_cast<double>(total_census) / trials;
    return row;
}

}  // namespace lab
