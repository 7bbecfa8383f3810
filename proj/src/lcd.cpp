#include "lab/lcd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lab {

namespace {

constexpr double kStrictSlack = 1e-12;
constexpr double kE = 2.718281828459045235360287;

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dist_to_lattice(std::span<const double> v, double rho) {
    double s = 0.0;
    for (double x : v) {
        const double y = rho * x;
        const double r = y - std::nearbyint(y);
        s += r * r;
    }
    return std::sqrt(s);
}

// Threshold at ||.||_2 = t: coeff * L * sqrt(log1(t / (divisor * L))).
double threshold_at(double t, const LcdFunctionalParams& f, double L) {
    const double y = t / (f.norm_divisor * L);
    if (y < kE) return 0.0;
    return f.thresh_coeff * L * std::sqrt(std::log(y));
}

struct RadialScanResult {
    bool found = false;
    double rho = 0.0;       // smallest qualifying radius located
    double residual = 0.0;  // dist at rho
    double threshold = 0.0;
};

// Infimum over rho in (0, cap] of the condition
//   dist(rho*u, Z^m) < threshold(rho*||u||)
// for a fixed direction u. The threshold is zero until the activation radius
// divisor*L*e/||u||, so the scan starts there. The coarse scan visits the
// global lattice {k * grid_step} (the same points a brute-force scan at
// grid_step sees); the Lipschitz bound |d dist/d rho| <= ||u|| plus the local
// threshold slope lets it skip lattice points that provably cannot qualify.
RadialScanResult radial_scan(std::span<const double> u, const LcdFunctionalParams& f,
                             const LcdParams& p, double cap) {
    RadialScanResult out;
    const double unorm = norm2(u);
    if (unorm == 0.0) return out;
    const double act = f.norm_divisor * p.L * kE / unorm;
    if (act > cap) return out;

    auto qualifies = [&](double rho, double& dist, double& thr) {
        dist = dist_to_lattice(u, rho);
        thr = threshold_at(rho * unorm, f, p.L);
        return dist + kStrictSlack < thr;
    };

    double dist, thr;
    if (qualifies(act, dist, thr)) {
        out.found = true;
        out.rho = act;
        out.residual = dist;
        out.threshold = thr;
        return out;
    }

    const double step = p.grid_step;
    long k = static_cast<long>(std::floor(act / step)) + 1;
    double rho = act;
    while (true) {
        const double next = static_cast<double>(k) * step;
        if (next > cap) return out;
        rho = next;
        if (qualifies(rho, dist, thr)) break;
        // Smallest lattice index whose point is not excluded by the
        // Lipschitz bound: the gap closes at rate <= ||u|| + slope, and the
        // threshold slope decreases in rho.
        const double t = rho * unorm;
        const double logy = std::log(t / (f.norm_divisor * p.L));
        double slope = 0.0;
        if (logy > 0.0) slope = f.thresh_coeff * p.L * unorm / (2.0 * t * std::sqrt(logy));
        const double gap = dist - thr;
        long next_k = k + 1;
        if (gap > 0.0) {
            const double safe = rho + 0.95 * gap / (unorm + slope);
            next_k = std::max(next_k, static_cast<long>(std::ceil(safe / step - 1e-9)));
        }
        k = next_k;
    }

    // Bisection toward the left boundary of the detected window.
    double lo = std::max(act, rho - step), hi = rho;
    double hd = dist, ht = thr;
    {
        double ld, lt;
        if (qualifies(lo, ld, lt)) {
            // window extends to the previous lattice cell edge or activation
            hi = lo;
            hd = ld;
            ht = lt;
            lo = act;
        }
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        double md, mt;
        if (qualifies(mid, md, mt)) {
            hi = mid;
            hd = md;
            ht = mt;
        } else {
            lo = mid;
        }
    }
    out.found = true;
    out.rho = hi;
    out.residual = hd;
    out.threshold = ht;
    return out;
}

LcdEstimate scan_1d(std::span<const double> x, const LcdFunctionalParams& f,
                    const LcdParams& p) {
    if (norm2(x) == 0.0) throw std::invalid_argument("lcd: zero vector");
    p.validate();
    const RadialScanResult r = radial_scan(x, f, p, p.cap);
    LcdEstimate e;
    if (!r.found) {
        e.value = p.cap;
        e.censored = true;
        e.witness = {p.cap, 0.0};
        e.residual = dist_to_lattice(x, p.cap);
        e.threshold_at_witness = threshold_at(p.cap * norm2(x), f, p.L);
        return e;
    }
    e.value = r.rho;
    e.witness = {r.rho, 0.0};
    e.residual = r.residual;
    e.threshold_at_witness = r.threshold;
    return e;
}

struct Parts {
    std::vector<double> x, y;
};

Parts split_parts(std::span<const cplx> z) {
    Parts p;
    p.x.resize(z.size());
    p.y.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        p.x[i] = z[i].real();
        p.y[i] = z[i].imag();
    }
    return p;
}

}  // namespace

void LcdParams::validate() const {
    if (!(L > 0.0)) throw std::invalid_argument("LcdParams: L must be positive");
    if (!(cap > 1.0)) throw std::invalid_argument("LcdParams: cap must exceed 1");
    if (!(grid_step > 0.0 && grid_step <= 1e-2 * cap)) {
        throw std::invalid_argument("LcdParams: grid_step must lie in (0, cap/100]");
    }
    if (angle_count < 4) throw std::invalid_argument("LcdParams: angle_count too small");
}

LcdParams LcdParams::paper(double p, double delta0) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("LcdParams::paper: p in (0,1]");
    LcdParams out;
    out.delta0 = delta0;
    out.L = 1.0 / std::sqrt(delta0 * p);
    out.cap = 1e6;  // activation radii scale with L; keep headroom
    out.grid_step = 1e-2;
    return out;
}

LcdParams LcdParams::scaled_test() {
    LcdParams out;
    out.L = 1.0;
    out.d1 = {0.3, 1.0};
    out.d1_hat = {0.3, 1.0};
    out.d2 = {0.3, 1.0};
    out.compl_divisor = 1.0;
    out.cap = 60.0;
    out.grid_step = 1e-3;
    return out;
}

double decorrelation(std::span<const cplx> z) {
    if (z.empty()) throw std::invalid_argument("decorrelation: zero vector");
    double xx = 0.0, yy = 0.0, xy = 0.0;
    for (const cplx& v : z) {
        xx += v.real() * v.real();
        yy += v.imag() * v.imag();
        xy += v.real() * v.imag();
    }
    if (xx + yy == 0.0) throw std::invalid_argument("decorrelation: zero vector");
    return std::sqrt(std::max(0.0, xx * yy - xy * xy));
}

CanonicalRotation canonical_rotation(std::span<const cplx> z) {
    if (z.empty()) throw std::invalid_argument("canonical_rotation: zero vector");
    double xx = 0.0, yy = 0.0, xy = 0.0;
    for (const cplx& v : z) {
        xx += v.real() * v.real();
        yy += v.imag() * v.imag();
        xy += v.real() * v.imag();
    }
    if (xx + yy == 0.0) throw std::invalid_argument("canonical_rotation: zero vector");
    // 2 tau = atan2(2<x,y>, ||x||^2 - ||y||^2); this branch already yields
    // ||w1|| >= ||w2||, and the tie atan2(0,0)=0 picks tau = 0.
    double tau = 0.5 * std::atan2(2.0 * xy, xx - yy);
    if (tau < 0.0) tau += 2.0 * M_PI;
    const double c = std::cos(tau), s = std::sin(tau);
    CanonicalRotation out;
    out.tau = tau;
    out.w1.resize(z.size());
    out.w2.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        // e^{-i tau} z = (c x + s y) + i (c y - s x)
        out.w1[i] = c * z[i].real() + s * z[i].imag();
        out.w2[i] = c * z[i].imag() - s * z[i].real();
    }
    return out;
}

SmallSplit small_split(std::span<const cplx> z, int m_large) {
    const int n = static_cast<int>(z.size());
    if (!(m_large > 0 && m_large < n)) {
        throw std::invalid_argument("small_split: need 0 < M < n");
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double ma = std::norm(z[a]);
        const double mb = std::norm(z[b]);
        if (ma != mb) return ma < mb;
        return a < b;
    });
    SmallSplit out;
    out.indices.assign(order.begin(), order.begin() + (n - m_large));
    std::sort(out.indices.begin(), out.indices.end());
    out.z_small.reserve(out.indices.size());
    for (int idx : out.indices) out.z_small.push_back(z[idx]);
    return out;
}

namespace {

// Squared moduli sorted descending; shared by the membership tests.
std::vector<double> sorted_sq_moduli(std::span<const cplx> z) {
    std::vector<double> m(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) m[i] = std::norm(z[i]);
    std::sort(m.begin(), m.end(), std::greater<>());
    return m;
}

}  // namespace

bool is_compressible(std::span<const cplx> z, int m, double delta) {
    const int n = static_cast<int>(z.size());
    if (!(m > 0 && m < n)) throw std::invalid_argument("is_compressible: need 0 < m < n");
    if (delta < 0.0) throw std::invalid_argument("is_compressible: delta must be >= 0");
    double nrm = 0.0;
    for (const cplx& v : z) nrm += std::norm(v);
    if (std::fabs(std::sqrt(nrm) - 1.0) > 1e-8) {
        throw std::invalid_argument("is_compressible: z must be unit norm");
    }
    const auto sq = sorted_sq_moduli(z);
    double tail = 0.0;
    for (int i = m; i < n; ++i) tail += sq[i];
    return std::sqrt(tail) <= delta;
}

bool is_dominated(std::span<const cplx> z, int m, double alpha) {
    const int n = static_cast<int>(z.size());
    if (!(m > 0 && m < n)) throw std::invalid_argument("is_dominated: need 0 < m < n");
    if (!(alpha > 0.0)) throw std::invalid_argument("is_dominated: alpha must be positive");
    double nrm = 0.0;
    for (const cplx& v : z) nrm += std::norm(v);
    if (std::fabs(std::sqrt(nrm) - 1.0) > 1e-8) {
        throw std::invalid_argument("is_dominated: z must be unit norm");
    }
    const auto sq = sorted_sq_moduli(z);
    double tail2 = 0.0;
    for (int i = m; i < n; ++i) tail2 += sq[i];
    const double tail_inf = std::sqrt(sq[m]);  // largest modulus in the tail
    return std::sqrt(tail2) <= alpha * std::sqrt(static_cast<double>(m)) * tail_inf;
}

LcdEstimate lcd_d1(std::span<const double> x, const LcdParams& params) {
    return scan_1d(x, params.d1, params);
}

LcdEstimate lcd_d1_hat(std::span<const double> x, const LcdParams& params) {
    return scan_1d(x, params.d1_hat, params);
}

namespace {

struct AngleScan {
    double rho = 0.0;        // smallest qualifying radius at this angle
    double vnorm = 0.0;      // ||cos(phi) x + sin(phi) y||
    bool found = false;
    double residual = 0.0;
    double threshold = 0.0;
};

AngleScan scan_angle(const Parts& parts, double phi, const LcdParams& p, double cap) {
    const std::size_t m = parts.x.size();
    std::vector<double> u(m);
    const double c = std::cos(phi), s = std::sin(phi);
    for (std::size_t i = 0; i < m; ++i) u[i] = c * parts.x[i] + s * parts.y[i];
    AngleScan a;
    a.vnorm = norm2(u);
    const RadialScanResult r = radial_scan(u, p.d2, p, cap);
    a.found = r.found;
    a.rho = r.rho;
    a.residual = r.residual;
    a.threshold = r.threshold;
    return a;
}

}  // namespace

LcdEstimate lcd_d2(std::span<const cplx> z, const LcdParams& params) {
    params.validate();
    double nrm = 0.0;
    for (const cplx& v : z) nrm += std::norm(v);
    if (nrm == 0.0) throw std::invalid_argument("lcd_d2: zero vector");
    const Parts parts = split_parts(z);

    LcdEstimate best;
    best.value = params.cap;
    best.censored = true;
    double best_phi = 0.0;

    // theta and -theta reach the same lattice distance, so angles cover
    // [0, pi). Angle 0 reproduces the D2 constants' one-dimensional scan.
    const int na = params.angle_count;
    for (int k = 0; k < na; ++k) {
        const double phi = M_PI * k / na;
        const AngleScan a = scan_angle(parts, phi, params, best.value);
        if (a.found && a.rho < best.value) {
            best.value = a.rho;
            best.censored = false;
            best.witness = {a.rho * std::cos(phi), a.rho * std::sin(phi)};
            best.residual = a.residual;
            best.threshold_at_witness = a.threshold;
            best_phi = phi;
        }
    }

    if (best.censored) {
        best.witness = {params.cap, 0.0};
        std::vector<double> u = parts.x;
        best.residual = dist_to_lattice(u, params.cap);
        best.threshold_at_witness = threshold_at(params.cap * norm2(u), params.d2, params.L);
        return best;
    }

    if (!params.angle_refine) return best;

    // Local angular refinement around the best direction.
    double dphi = M_PI / na;
    for (int round = 0; round < 6; ++round) {
        dphi *= 0.5;
        for (const double cand : {best_phi - dphi, best_phi + dphi}) {
            const AngleScan a = scan_angle(parts, cand, params, best.value);
            if (a.found && a.rho < best.value) {
                best.value = a.rho;
                best.witness = {a.rho * std::cos(cand), a.rho * std::sin(cand)};
                best.residual = a.residual;
                best.threshold_at_witness = a.threshold;
                best_phi = cand;
            }
        }
    }
    return best;
}

DeltaEstimate delta_aux(std::span<const cplx> z, const LcdParams& params) {
    const LcdEstimate d2 = lcd_d2(z, params);
    DeltaEstimate out;
    if (d2.censored) {
        out.est = d2;
        out.bracket_lo = out.bracket_hi = d2.value;
        return out;
    }
    const Parts parts = split_parts(z);
    const double tau_max = 1.5;

    // Per angle the smallest qualifying radius is independent of tau; only
    // the admissibility cutoff ||theta|| <= tau*D2 changes with k.
    struct Candidate {
        double rho, image_norm, phi, residual, threshold;
    };
    std::vector<Candidate> cands;
    const int na = params.angle_count;
    const double witness_phi = std::atan2(d2.witness[1], d2.witness[0]);
    for (int k = 0; k <= na; ++k) {
        const double phi = (k == na) ? witness_phi : M_PI * k / na;
        const AngleScan a = scan_angle(parts, phi, params, tau_max * d2.value + 1e-9);
        if (a.found) {
            cands.push_back({a.rho, a.rho * a.vnorm, phi, a.residual, a.threshold});
        }
    }

    double lo = 0.0, hi = 0.0;
    LcdEstimate at_k10;
    for (int k = 1; k <= 10; ++k) {
        const double tau = 1.0 + std::ldexp(1.0, -k);
        const double limit = tau * d2.value;
        double best_img = std::numeric_limits<double>::infinity();
        const Candidate* best = nullptr;
        for (const auto& c : cands) {
            if (c.rho <= limit && c.image_norm < best_img) {
                best_img = c.image_norm;
                best = &c;
            }
        }
        LcdEstimate e;
        if (best == nullptr) {
            e.value = params.cap;
            e.censored = true;
        } else {
            e.value = best->image_norm;
            e.witness = {best->rho * std::cos(best->phi), best->rho * std::sin(best->phi)};
            e.residual = best->residual;
            e.threshold_at_witness = best->threshold;
        }
        if (k == 1) {
            lo = hi = e.value;
        } else {
            lo = std::min(lo, e.value);
            hi = std::max(hi, e.value);
        }
        if (k == 10) at_k10 = e;
    }
    out.est = at_k10;
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    return out;
}

VectorTaxonomy classify(std::span<const cplx> z, int m_large, const LcdParams& params,
                        double comp_delta, double dom_alpha) {
    const int n = static_cast<int>(z.size());
    if (!(m_large > 0 && 2 * m_large < n)) {
        throw std::invalid_argument("classify: need 0 < M < n/2");
    }
    VectorTaxonomy t;
    t.comp_m = t.dom_m = m_large;
    t.comp_delta = comp_delta;
    t.dom_alpha = dom_alpha;
    t.compressible = is_compressible(z, m_large, comp_delta);
    t.dominated = is_dominated(z, m_large, dom_alpha);

    const SmallSplit split = small_split(z, m_large);
    double small_norm = 0.0;
    for (const cplx& v : split.z_small) small_norm += std::norm(v);
    small_norm = std::sqrt(small_norm);
    if (small_norm == 0.0) throw std::invalid_argument("classify: degenerate z_small = 0");

    // Rotate z_small to the normal form w1 + i w2 and normalize.
    const CanonicalRotation rot = canonical_rotation(split.z_small);
    const std::size_t m = split.z_small.size();
    std::vector<cplx> znorm(m);
    t.phi.resize(m);
    t.psi.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        t.phi[i] = rot.w1[i] / small_norm;
        t.psi[i] = rot.w2[i] / small_norm;
        znorm[i] = cplx(t.phi[i], t.psi[i]);
    }

    t.d_small = decorrelation(znorm);
    t.lcd2_small = lcd_d2(znorm, params);
    t.delta_small = delta_aux(znorm, params);

    const double log1_arg = t.delta_small.est.value / (params.compl_divisor * params.L);
    const double log1 = log1_arg >= kE ? std::log(log1_arg) : 0.0;
    t.class_threshold_rhs =
        params.compl_coeff * params.L / t.lcd2_small.value * std::sqrt(log1);
    t.cls = t.d_small >= t.class_threshold_rhs ? VectorClass::GenuinelyComplex
                                               : VectorClass::EssentiallyReal;

    double phi_inf = 0.0, phi_norm = 0.0;
    for (double v : t.phi) {
        phi_inf = std::max(phi_inf, std::fabs(v));
        phi_norm += v * v;
    }
    phi_norm = std::sqrt(phi_norm);
    t.inf_norm_ratio = phi_norm > 0.0 ? phi_inf / phi_norm : 0.0;
    return t;
}

}  // namespace lab
