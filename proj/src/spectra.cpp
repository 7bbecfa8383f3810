#include "lab/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "lab/linalg.hpp"

namespace lab {

namespace {
constexpr double kLogFloor = -690.77552789821368;  // log(1e-300)
}

void SpectralSample::validate() const {
    double s2 = 0.0;
    for (std::size_t i = 0; i < singular_values.size(); ++i) {
        if (singular_values[i] < 0.0) throw std::runtime_error("SpectralSample: negative s_i");
        if (i > 0 && singular_values[i] > singular_values[i - 1]) {
            throw std::runtime_error("SpectralSample: singular values not descending");
        }
        s2 += singular_values[i] * singular_values[i];
    }
    if (std::fabs(s2 - frobenius_sq) > 1e-8 * std::max(frobenius_sq, 1e-30)) {
        throw std::runtime_error("SpectralSample: sum s_i^2 != ||M||_F^2");
    }
}

SymmetrizedMeasure symmetrized_measure_from_sv(const std::vector<double>& sv) {
    SymmetrizedMeasure m;
    m.atoms.reserve(2 * sv.size());
    for (double s : sv) {
        m.atoms.push_back(s);
        m.atoms.push_back(-s);
    }
    return m;
}

SymmetrizedMeasure symmetrized_sv_measure(const SpectralSample& sample) {
    return symmetrized_measure_from_sv(sample.singular_values);
}

cplx stieltjes(const SymmetrizedMeasure& m, cplx zeta) {
    if (!(zeta.imag() > 0.0)) {
        throw std::invalid_argument("stieltjes: Im zeta must be positive");
    }
    if (m.atoms.empty()) throw std::invalid_argument("stieltjes: empty measure");
    const double w = m.weight();
    cplx s = 0.0;
    for (double a : m.atoms) s += 1.0 / (a - zeta);
    return w * s;
}

LogPotential log_potential(const MatrixC& a, cplx w, double scale) {
    const double raw = lu_logabsdet(shifted(a, w, scale));
    if (std::isinf(raw)) return {kLogFloor, true};
    return {raw / a.rows(), false};
}

DensityGrid girko_density_grid(const MatrixC& a, double scale, const GridSpec& grid) {
    if (!(grid.h > 0.0 && grid.h <= 0.25)) {
        throw SpecError("girko_density_grid: h must lie in (0, 0.25]");
    }
    if (!(grid.r_max >= 1.2)) throw SpecError("girko_density_grid: r_max must be >= 1.2");
    const int half = static_cast<int>(std::ceil(grid.r_max / grid.h - 1e-12));
    const int side = 2 * half + 1;
    if (static_cast<long>(side) * side > 20000) {
        throw SpecError("girko_density_grid: grid exceeds 2e4 nodes");
    }
    const int n = a.rows();
    const double h = grid.h;

    DensityGrid out;
    out.spec = grid;
    out.side = side;
    out.nodes.resize(static_cast<std::size_t>(side) * side);
    out.values.assign(out.nodes.size(), 0.0);
    out.boundary.assign(out.nodes.size(), 0);
    out.near_real_axis.assign(out.nodes.size(), 0);

    // One Hessenberg reduction, then each node costs O(n^2).
    const MatrixC hess = hessenberg_form(shifted(a, 0.0, scale));
    out.potential.resize(out.nodes.size());
    std::vector<double>& u = out.potential;
    for (int iy = 0; iy < side; ++iy) {
        const double im = (iy - half) * h;
        for (int ix = 0; ix < side; ++ix) {
            const double re = (ix - half) * h;
            const std::size_t idx = static_cast<std::size_t>(iy) * side + ix;
            out.nodes[idx] = cplx(re, im);
            out.near_real_axis[idx] = std::fabs(im) < 0.05 ? 1 : 0;
            out.boundary[idx] = (ix == 0 || iy == 0 || ix == side - 1 || iy == side - 1) ? 1 : 0;
            const double raw = hessenberg_shifted_logabsdet(hess, cplx(re, im));
            if (std::isinf(raw)) {
                u[idx] = kLogFloor;
                ++out.floored_nodes;
            } else {
                u[idx] = raw / n;
            }
        }
    }

    const double inv = 1.0 / (2.0 * M_PI * h * h);
    auto at = [&](int ix, int iy) { return u[static_cast<std::size_t>(iy) * side + ix]; };
    auto d2_axis = [&](int c, int lim, auto fetch) {
        // second difference along one axis; one-sided at the ends
        if (c == 0) return fetch(0) - 2.0 * fetch(1) + fetch(2);
        if (c == lim - 1) return fetch(lim - 1) - 2.0 * fetch(lim - 2) + fetch(lim - 3);
        return fetch(c - 1) - 2.0 * fetch(c) + fetch(c + 1);
    };
    for (int iy = 0; iy < side; ++iy) {
        for (int ix = 0; ix < side; ++ix) {
            const std::size_t idx = static_cast<std::size_t>(iy) * side + ix;
            const double dxx = d2_axis(ix, side, [&](int t) { return at(t, iy); });
            const double dyy = d2_axis(iy, side, [&](int t) { return at(ix, t); });
            double density = (dxx + dyy) * inv;
            if (density < 0.0) {
                if (!out.boundary[idx]) out.clamped_mass += -density * h * h;
                density = 0.0;
            }
            out.values[idx] = density;
            if (!out.boundary[idx]) out.mass += density * h * h;
        }
    }
    return out;
}

double radial_ks_statistic(const std::vector<cplx>& eigenvalues) {
    if (eigenvalues.empty()) throw std::invalid_argument("radial_ks_statistic: empty list");
    const std::size_t n = eigenvalues.size();
    std::vector<double> mod(n);
    for (std::size_t i = 0; i < n; ++i) mod[i] = std::abs(eigenvalues[i]);
    std::sort(mod.begin(), mod.end());
    double d = 0.0;
    std::size_t inside = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mod[i] > 1.0) break;
        inside = i + 1;
        const double g = mod[i] * mod[i];
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - g));
        d = std::max(d, std::fabs(static_cast<double>(i) / n - g));
    }
    // right end: F stays at inside/n on [mod_last, 1]
    d = std::max(d, std::fabs(static_cast<double>(inside) / n - 1.0));
    return d;
}

double lambda_plus(cplx w) {
    const double root = std::sqrt(1.0 + 8.0 * std::norm(w));
    const double num = (root + 3.0) * (root + 3.0) * (root + 3.0);
    return num / (8.0 * (root + 1.0));
}

LogTailMass log_tail_mass(const SymmetrizedMeasure& m, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("log_tail_mass: tau in (0,1)");
    LogTailMass out;
    const double w = m.weight();
    for (double a : m.atoms) {
        const double mag = std::fabs(a);
        if (mag == 0.0) {
            ++out.zero_atoms_excluded;
            continue;
        }
        if (mag < tau) out.value += w * std::fabs(std::log(mag));
    }
    return out;
}

std::vector<double> shifted_singular_spectrum(const EnsembleSpec& spec, std::uint64_t trial,
                                              cplx w) {
    const MatrixC a = sample_matrix(spec, trial);
    const MatrixC b = shifted(a, w, ensemble_scale(spec));
    return gram_singular_values(b);
}

SpectralSample make_spectral_sample(const EnsembleSpec& spec, std::uint64_t trial, cplx w,
                                    bool with_eigenvalues) {
    const MatrixC a = sample_matrix(spec, trial);
    const MatrixC b = shifted(a, w, ensemble_scale(spec));
    SpectralSample s;
    s.w = w;
    s.ensemble = spec;
    s.frobenius_sq = b.frob_sq();
    s.singular_values = gram_singular_values(b);
    if (with_eigenvalues) s.eigenvalues = eigenvalues(b);
    s.validate();
    return s;
}

double stieltjes_compare(const EnsembleSpec& spec_a, const EnsembleSpec& spec_b, cplx w,
                         cplx zeta, int trials) {
    if (trials <= 0) throw SpecError("stieltjes_compare: trials must be positive");
    if (!(zeta.imag() > 0.0)) throw SpecError("stieltjes_compare: Im zeta must be positive");
    cplx mean_a = 0.0, mean_b = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto sv_a = shifted_singular_spectrum(spec_a, t, w);
        const auto sv_b = shifted_singular_spectrum(spec_b, t, w);
        mean_a += stieltjes(symmetrized_measure_from_sv(sv_a), zeta);
        mean_b += stieltjes(symmetrized_measure_from_sv(sv_b), zeta);
    }
    mean_a /= static_cast<double>(trials);
    mean_b /= static_cast<double>(trials);
    return std::abs(mean_a - mean_b);
}

}  // namespace lab
