#include "lab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lab/rng.hpp"

namespace lab {

namespace {

constexpr double kPivotFloor = 1e-300;

inline double abs2(const cplx& z) { return std::norm(z); }

// |z| without the hypot call; safe here because all inputs are O(||M||).
inline double cabs(const cplx& z) { return std::sqrt(std::norm(z)); }

}  // namespace

// ---------------------------------------------------------------------------
// LU with partial pivoting
// ---------------------------------------------------------------------------

LuFactor lu_factor(const MatrixC& m) {
    if (!m.square()) throw std::invalid_argument("lu_factor: matrix must be square");
    const int n = m.rows();
    LuFactor f{m, std::vector<int>(n), false};
    MatrixC& a = f.lu;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = abs2(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = abs2(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        f.pivot[k] = piv;
        if (piv != k) {
            cplx* rk = a.row(k);
            cplx* rp = a.row(piv);
            for (int j = 0; j < n; ++j) std::swap(rk[j], rp[j]);
        }
        const cplx pv = a(k, k);
        if (cabs(pv) < kPivotFloor) {
            f.singular = true;
            return f;
        }
        const cplx inv = 1.0 / pv;
        for (int i = k + 1; i < n; ++i) {
            const cplx lik = a(i, k) * inv;
            a(i, k) = lik;
            if (lik == cplx(0.0, 0.0)) continue;
            cplx* ri = a.row(i);
            const cplx* rk = a.row(k);
            for (int j = k + 1; j < n; ++j) ri[j] -= lik * rk[j];
        }
    }
    return f;
}

std::vector<cplx> LuFactor::solve(const std::vector<cplx>& b) const {
    const int n = lu.rows();
    if (singular) throw std::runtime_error("LuFactor::solve: factor is singular");
    std::vector<cplx> x = b;
    // Permutation first, then clean triangular solves; the stored L refers to
    // the final row ordering.
    for (int k = 0; k < n; ++k) {
        if (pivot[k] != k) std::swap(x[k], x[pivot[k]]);
    }
    for (int k = 0; k < n; ++k) {
        const cplx xk = x[k];
        if (xk == cplx(0.0, 0.0)) continue;
        for (int i = k + 1; i < n; ++i) x[i] -= lu(i, k) * xk;
    }
    for (int k = n - 1; k >= 0; --k) {
        cplx s = x[k];
        const cplx* rk = lu.row(k);
        for (int j = k + 1; j < n; ++j) s -= rk[j] * x[j];
        x[k] = s / rk[k];
    }
    return x;
}

double lu_logabsdet(const MatrixC& m) {
    if (!m.square()) throw std::invalid_argument("lu_logabsdet: matrix must be square");
    const int n = m.rows();
    MatrixC a = m;
    double logdet = 0.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = abs2(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = abs2(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (piv != k) {
            cplx* rk = a.row(k);
            cplx* rp = a.row(piv);
            for (int j = k; j < n; ++j) std::swap(rk[j], rp[j]);
        }
        const cplx pv = a(k, k);
        const double apv = cabs(pv);
        if (apv < kPivotFloor) return -std::numeric_limits<double>::infinity();
        logdet += std::log(apv);
        const cplx inv = 1.0 / pv;
        for (int i = k + 1; i < n; ++i) {
            const cplx lik = a(i, k) * inv;
            if (lik == cplx(0.0, 0.0)) continue;
            cplx* ri = a.row(i);
            const cplx* rk = a.row(k);
            for (int j = k + 1; j < n; ++j) ri[j] -= lik * rk[j];
        }
    }
    return logdet;
}

// ---------------------------------------------------------------------------
// One-sided Jacobi SVD
// ---------------------------------------------------------------------------

SvdResult jacobi_svd(const MatrixC& m) {
    // Work on columns; for wide input operate on the adjoint, whose right
    // singular vectors are not needed by any caller with rows < cols.
    const MatrixC* src = &m;
    MatrixC transposed;
    if (m.rows() < m.cols()) {
        transposed = m.adjoint();
        src = &transposed;
    }
    const int rows = src->rows();
    const int nc = src->cols();

    // Column-major copy so a rotation touches two contiguous strips.
    std::vector<cplx> col(static_cast<std::size_t>(rows) * nc);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < nc; ++j) col[static_cast<std::size_t>(j) * rows + i] = (*src)(i, j);
    }
    MatrixC v = MatrixC::identity(nc);

    constexpr double kTol = 1e-12;
    constexpr int kMaxSweeps = 60;
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (int i = 0; i < nc - 1; ++i) {
            cplx* ci = col.data() + static_cast<std::size_t>(i) * rows;
            for (int j = i + 1; j < nc; ++j) {
                cplx* cj = col.data() + static_cast<std::size_t>(j) * rows;
                double gii = 0.0, gjj = 0.0;
                cplx gij = 0.0;
                for (int k = 0; k < rows; ++k) {
                    gii += abs2(ci[k]);
                    gjj += abs2(cj[k]);
                    gij += std::conj(ci[k]) * cj[k];
                }
                const double off = cabs(gij);
                if (off <= kTol * std::sqrt(gii * gjj) || off == 0.0) continue;
                rotated = true;
                // De-phase so the Gram off-diagonal is real, then a real
                // Jacobi rotation on [[gii, off], [off, gjj]].
                const cplx phase = gij / off;
                const double zeta = (gjj - gii) / (2.0 * off);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                const cplx sp = s * std::conj(phase);   // applied to column j into i
                const cplx cp = c * std::conj(phase);   // phase-absorbed j scale
                for (int k = 0; k < rows; ++k) {
                    const cplx ui = ci[k];
                    const cplx uj = cj[k];
                    ci[k] = c * ui - sp * uj;
                    cj[k] = s * ui + cp * uj;
                }
                for (int k = 0; k < nc; ++k) {
                    const cplx ui = v(k, i);
                    const cplx uj = v(k, j);
                    v(k, i) = c * ui - sp * uj;
                    v(k, j) = s * ui + cp * uj;
                }
            }
        }
        if (!rotated) break;
    }
    if (sweep == kMaxSweeps) {
        throw ConvergenceError("jacobi_svd: no convergence within sweep cap", kMaxSweeps);
    }

    std::vector<int> order(nc);
    std::vector<double> norms(nc);
    for (int j = 0; j < nc; ++j) {
        double s = 0.0;
        const cplx* cj = col.data() + static_cast<std::size_t>(j) * rows;
        for (int k = 0; k < rows; ++k) s += abs2(cj[k]);
        norms[j] = std::sqrt(s);
        order[j] = j;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return norms[a] > norms[b]; });

    SvdResult r;
    r.sweeps = sweep + 1;
    r.values.resize(nc);
    r.right_vectors = MatrixC(nc, nc);
    for (int j = 0; j < nc; ++j) {
        r.values[j] = norms[order[j]];
        for (int k = 0; k < nc; ++k) r.right_vectors(k, j) = v(k, order[j]);
    }
    return r;
}

std::vector<double> singular_values(const MatrixC& m) { return jacobi_svd(m).values; }

std::vector<double> gram_singular_values(const MatrixC& m) {
    if (!m.square()) {
        throw std::invalid_argument("gram_singular_values: square input required");
    }
    const std::vector<double> lam = hermitian_eigenvalues(m.gram());
    std::vector<double> s(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
        s[i] = std::sqrt(std::max(0.0, lam[lam.size() - 1 - i]));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Smallest singular pair
// ---------------------------------------------------------------------------

namespace {

double vec_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& x : v) s += abs2(x);
    return std::sqrt(s);
}

SingularPair smallest_pair_by_svd(const MatrixC& m) {
    // Pad wide input with zero rows: the extra zero singular value's right
    // vector is exactly the null direction we want.
    MatrixC square = m;
    if (m.rows() < m.cols()) {
        square = MatrixC(m.cols(), m.cols());
        for (int i = 0; i < m.rows(); ++i) {
            for (int j = 0; j < m.cols(); ++j) square(i, j) = m(i, j);
        }
    }
    const SvdResult svd = jacobi_svd(square);
    SingularPair p;
    p.used_fallback = true;
    const int last = square.cols() - 1;
    p.vector.resize(square.cols());
    for (int k = 0; k < square.cols(); ++k) p.vector[k] = svd.right_vectors(k, last);
    const std::vector<cplx> mv = m.apply(p.vector);
    p.value = vec_norm(mv);
    return p;
}

}  // namespace

SingularPair smallest_singular_pair(const MatrixC& m) {
    if (m.rows() != m.cols() && m.rows() != m.cols() - 1) {
        throw std::invalid_argument("smallest_singular_pair: needs square or (n-1) x n input");
    }
    const int n = m.cols();
    const double frob_sq = m.frob_sq();
    if (frob_sq == 0.0) {
        SingularPair p;
        p.vector.assign(n, 0.0);
        p.vector[0] = 1.0;
        return p;
    }

    const MatrixC b = m.gram();
    MatrixC reg = b;
    const double eps = 1e-20 * frob_sq;
    for (int i = 0; i < n; ++i) reg(i, i) += eps;
    const LuFactor f = lu_factor(reg);
    if (f.singular) return smallest_pair_by_svd(m);

    Philox rng(0x736d696eu, streams::id(streams::kStartVector, 0));
    std::vector<cplx> v(n);
    for (int i = 0; i < n; ++i) {
        const auto g = rng.next_gaussian_pair();
        v[i] = cplx(g[0], g[1]);
    }
    double nrm = vec_norm(v);
    for (cplx& x : v) x /= nrm;

    double rayleigh = std::numeric_limits<double>::infinity();
    bool converged = false;
    int it = 0;
    for (; it < 50; ++it) {
        std::vector<cplx> w = f.solve(v);
        nrm = vec_norm(w);
        if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
        for (cplx& x : w) x /= nrm;
        // Rayleigh quotient of M*M at w (real for Hermitian input).
        const std::vector<cplx> bw = b.apply(w);
        double q = 0.0;
        for (int i = 0; i < n; ++i) {
            q += (std::conj(w[i]) * bw[i]).real();
        }
        q = std::max(q, 0.0);
        v = std::move(w);
        const double prev = rayleigh;
        rayleigh = q;
        if (std::isfinite(prev)) {
            const double denom = std::max(rayleigh, eps);
            if (std::fabs(prev - rayleigh) <= 1e-14 * denom) {
                converged = true;
                ++it;
                break;
            }
        }
    }
    if (!converged) {
        // Stalled Rayleigh quotient can still carry a fully converged
        // eigenvector; accept on a tight eigenpair residual, otherwise pay
        // for the full SVD.
        const std::vector<cplx> bv = b.apply(v);
        double res = 0.0;
        for (int i = 0; i < n; ++i) res += abs2(bv[i] - rayleigh * v[i]);
        if (std::sqrt(res) > 1e-9 * frob_sq) return smallest_pair_by_svd(m);
    }

    SingularPair p;
    p.iterations = it;
    p.vector = v;
    p.value = vec_norm(m.apply(v));
    return p;
}

double largest_singular_value(const MatrixC& m, int lanczos_steps) {
    const int n = m.cols();
    if (n == 0) return 0.0;
    if (m.frob_sq() == 0.0) return 0.0;
    const int steps = std::min(lanczos_steps, n);

    Philox rng(0x736d6178u, streams::id(streams::kStartVector, 1));
    std::vector<cplx> q(n);
    for (int i = 0; i < n; ++i) {
        const auto g = rng.next_gaussian_pair();
        q[i] = cplx(g[0], g[1]);
    }
    double nrm = vec_norm(q);
    for (cplx& x : q) x /= nrm;

    // Lanczos on B = M*M. Extremal Ritz values converge long before any
    // loss-of-orthogonality artifact can overshoot the true maximum by more
    // than the tolerance any caller uses, so no reorthogonalization.
    std::vector<double> alpha, beta;
    std::vector<cplx> q_prev(n, 0.0);
    for (int k = 0; k < steps; ++k) {
        std::vector<cplx> w = m.apply_adjoint(m.apply(q));
        double a = 0.0;
        for (int i = 0; i < n; ++i) a += (std::conj(q[i]) * w[i]).real();
        alpha.push_back(a);
        for (int i = 0; i < n; ++i) w[i] -= a * q[i];
        if (k > 0) {
            const double bk = beta.back();
            for (int i = 0; i < n; ++i) w[i] -= bk * q_prev[i];
        }
        const double b = vec_norm(w);
        if (b < 1e-13 * std::sqrt(std::fabs(alpha.front()) + 1.0)) break;
        beta.push_back(b);
        q_prev = q;
        for (int i = 0; i < n; ++i) q[i] = w[i] / b;
    }
    beta.resize(alpha.size() > 0 ? alpha.size() - 1 : 0);

    // Largest Ritz value from the (small) Lanczos tridiagonal.
    const int k = static_cast<int>(alpha.size());
    MatrixC t(k, k);
    for (int i = 0; i < k; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < k) {
            t(i, i + 1) = beta[i];
            t(i + 1, i) = beta[i];
        }
    }
    const std::vector<double> ritz = hermitian_eigenvalues(t);
    return std::sqrt(std::max(0.0, ritz.back()));
}

// ---------------------------------------------------------------------------
// Hessenberg reduction and complex QR eigenvalues
// ---------------------------------------------------------------------------

MatrixC hessenberg_form(const MatrixC& m) {
    if (!m.square()) throw std::invalid_argument("hessenberg_form: matrix must be square");
    const int n = m.rows();
    MatrixC a = m;
    std::vector<cplx> v(n);
    for (int k = 0; k < n - 2; ++k) {
        // Householder vector for column k below the subdiagonal.
        double xnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) xnorm2 += abs2(a(i, k));
        if (xnorm2 == 0.0) continue;
        const cplx x0 = a(k + 1, k);
        const double xnorm = std::sqrt(xnorm2);
        const cplx phase = (x0 == cplx(0.0, 0.0)) ? cplx(1.0, 0.0) : x0 / cabs(x0);
        const cplx alpha = -phase * xnorm;
        double vnorm2 = 0.0;
        v[k + 1] = x0 - alpha;
        vnorm2 += abs2(v[k + 1]);
        for (int i = k + 2; i < n; ++i) {
            v[i] = a(i, k);
            vnorm2 += abs2(v[i]);
        }
        if (vnorm2 == 0.0) continue;
        const double betaf = 2.0 / vnorm2;

        // A <- P A, rows k+1..n-1, P = I - beta v v*
        for (int j = k; j < n; ++j) {
            cplx s = 0.0;
            for (int i = k + 1; i < n; ++i) s += std::conj(v[i]) * a(i, j);
            s *= betaf;
            if (s == cplx(0.0, 0.0)) continue;
            for (int i = k + 1; i < n; ++i) a(i, j) -= v[i] * s;
        }
        // A <- A P, columns k+1..n-1
        for (int i = 0; i < n; ++i) {
            cplx* ri = a.row(i);
            cplx s = 0.0;
            for (int j = k + 1; j < n; ++j) s += ri[j] * v[j];
            s *= betaf;
            if (s == cplx(0.0, 0.0)) continue;
            for (int j = k + 1; j < n; ++j) ri[j] -= s * std::conj(v[j]);
        }
        a(k + 1, k) = alpha;
        for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
    return a;
}

namespace {

// Complex Givens rotation: returns (c real, s) with
// [c s; -conj(s) c] * (f, g)^T = (r, 0)^T.
inline void givens(const cplx& f, const cplx& g, double& c, cplx& s) {
    const double af = cabs(f);
    const double ag = cabs(g);
    if (ag == 0.0) {
        c = 1.0;
        s = 0.0;
        return;
    }
    if (af == 0.0) {
        c = 0.0;
        s = g / ag;
        s = std::conj(s);
        return;
    }
    const double r = std::sqrt(af * af + ag * ag);
    c = af / r;
    s = (f / af) * std::conj(g) / r;
}

std::array<cplx, 2> eig2x2(const cplx& a, const cplx& b, const cplx& c, const cplx& d) {
    const cplx half_tr = 0.5 * (a + d);
    const cplx delta = 0.5 * (a - d);
    const cplx disc = std::sqrt(delta * delta + b * c);
    return {half_tr + disc, half_tr - disc};
}

}  // namespace

std::vector<cplx> eigenvalues(const MatrixC& m) {
    if (!m.square()) throw std::invalid_argument("eigenvalues: matrix must be square");
    const int n = m.rows();
    if (n > 2048) throw std::invalid_argument("eigenvalues: n capped at 2048");
    if (n == 1) return {m(0, 0)};

    MatrixC h = hessenberg_form(m);
    std::vector<cplx> eig(n);
    const long max_total = 40L * n;
    long total_iters = 0;

    int hi = n - 1;
    int stalled = 0;
    while (hi >= 0) {
        if (hi == 0) {
            eig[0] = h(0, 0);
            break;
        }
        // Deflation scan from the bottom of the active block.
        int lo = hi;
        while (lo > 0) {
            const double tol =
                1e-12 * (cabs(h(lo - 1, lo - 1)) + cabs(h(lo, lo))) + 1e-280;
            if (cabs(h(lo, lo - 1)) <= tol) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eig[hi] = h(hi, hi);
            --hi;
            stalled = 0;
            continue;
        }
        if (lo == hi - 1) {
            const auto two = eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
            eig[lo] = two[0];
            eig[hi] = two[1];
            hi -= 2;
            stalled = 0;
            continue;
        }
        if (++total_iters > max_total) {
            throw ConvergenceError("eigenvalues: QR iteration cap exceeded",
                                   static_cast<int>(total_iters));
        }
        // Wilkinson shift from the trailing 2x2; exceptional shift when the
        // same corner refuses to deflate.
        cplx sigma;
        ++stalled;
        if (stalled % 12 == 0) {
            sigma = h(hi, hi) + 0.75 * (cabs(h(hi, hi - 1)) + cabs(h(hi - 1, hi - 2)));
        } else {
            const auto two = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
            sigma = (cabs(two[0] - h(hi, hi)) < cabs(two[1] - h(hi, hi))) ? two[0] : two[1];
        }

        // Implicit single-shift QR sweep on the active block [lo, hi].
        cplx x = h(lo, lo) - sigma;
        cplx y = h(lo + 1, lo);
        for (int k = lo; k < hi; ++k) {
            double c;
            cplx s;
            givens(x, y, c, s);
            const int jmin = std::max(lo, k - 1);
            // Left rotation on rows k, k+1.
            for (int j = jmin; j <= hi; ++j) {
                const cplx a0 = h(k, j);
                const cplx a1 = h(k + 1, j);
                h(k, j) = c * a0 + s * a1;
                h(k + 1, j) = -std::conj(s) * a0 + c * a1;
            }
            // Right rotation on columns k, k+1.
            const int imax = std::min(hi, k + 2);
            for (int i = lo; i <= imax; ++i) {
                const cplx a0 = h(i, k);
                const cplx a1 = h(i, k + 1);
                h(i, k) = c * a0 + std::conj(s) * a1;
                h(i, k + 1) = -s * a0 + c * a1;
            }
            if (k < hi - 1) {
                x = h(k + 1, k);
                y = h(k + 2, k);
            }
        }
    }
    return eig;
}

double hessenberg_shifted_logabsdet(const MatrixC& h, cplx w) {
    if (!h.square()) {
        throw std::invalid_argument("hessenberg_shifted_logabsdet: square input required");
    }
    const int n = h.rows();
    std::vector<cplx> carry(n), next(n);
    for (int j = 0; j < n; ++j) carry[j] = h(0, j);
    carry[0] -= w;
    double logdet = 0.0;
    for (int k = 0; k < n - 1; ++k) {
        for (int j = k; j < n; ++j) next[j] = h(k + 1, j);
        next[k + 1] -= w;
        if (abs2(next[k]) > abs2(carry[k])) {
            std::swap_ranges(carry.begin() + k, carry.end(), next.begin() + k);
        }
        const double apv = cabs(carry[k]);
        if (apv < kPivotFloor) return -std::numeric_limits<double>::infinity();
        logdet += std::log(apv);
        const cplx factor = next[k] / carry[k];
        if (factor != cplx(0.0, 0.0)) {
            for (int j = k + 1; j < n; ++j) next[j] -= factor * carry[j];
        }
        std::swap(carry, next);
    }
    const double last = cabs(carry[n - 1]);
    if (last < kPivotFloor) return -std::numeric_limits<double>::infinity();
    return logdet + std::log(last);
}

// ---------------------------------------------------------------------------
// Hermitization and Hermitian eigenvalues
// ---------------------------------------------------------------------------

MatrixC hermitization(const MatrixC& m) {
    if (!m.square()) throw std::invalid_argument("hermitization: matrix must be square");
    const int n = m.rows();
    MatrixC h(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            h(i, n + j) = m(i, j);
            h(n + j, i) = std::conj(m(i, j));
        }
    }
    return h;
}

std::vector<double> hermitian_eigenvalues(const MatrixC& hin) {
    if (!hin.square()) {
        throw std::invalid_argument("hermitian_eigenvalues: matrix must be square");
    }
    const int n = hin.rows();
    double maxabs = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) maxabs = std::max(maxabs, cabs(hin(i, j)));
    }
    const double htol = 1e-12 * std::max(1.0, maxabs);
    for (int i = 0; i < n; ++i) {
        if (std::fabs(hin(i, i).imag()) > htol) {
            throw std::invalid_argument("hermitian_eigenvalues: input is not Hermitian");
        }
        for (int j = i + 1; j < n; ++j) {
            if (cabs(hin(i, j) - std::conj(hin(j, i))) > htol) {
                throw std::invalid_argument("hermitian_eigenvalues: input is not Hermitian");
            }
        }
    }

    // Householder tridiagonalization. d carries the diagonal, e the
    // subdiagonal magnitudes (phases are absorbed; they do not change the
    // spectrum).
    MatrixC a = hin;
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0);
    std::vector<cplx> v(n), p(n);
    for (int k = 0; k < n - 2; ++k) {
        double xnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) xnorm2 += abs2(a(i, k));
        const cplx x0 = a(k + 1, k);
        if (xnorm2 == 0.0) {
            e[k] = 0.0;
            continue;
        }
        const double xnorm = std::sqrt(xnorm2);
        const cplx phase = (x0 == cplx(0.0, 0.0)) ? cplx(1.0, 0.0) : x0 / cabs(x0);
        const cplx alpha = -phase * xnorm;
        v[k + 1] = x0 - alpha;
        double vnorm2 = abs2(v[k + 1]);
        for (int i = k + 2; i < n; ++i) {
            v[i] = a(i, k);
            vnorm2 += abs2(v[i]);
        }
        if (vnorm2 == 0.0) {
            e[k] = xnorm;
            continue;
        }
        const double beta = 2.0 / vnorm2;
        // p = beta * A v on the trailing block
        for (int i = k + 1; i < n; ++i) {
            cplx s = 0.0;
            const cplx* ri = a.row(i);
            for (int j = k + 1; j < n; ++j) s += ri[j] * v[j];
            p[i] = beta * s;
        }
        cplx vp = 0.0;
        for (int i = k + 1; i < n; ++i) vp += std::conj(v[i]) * p[i];
        const cplx kappa = 0.5 * beta * vp;
        for (int i = k + 1; i < n; ++i) p[i] -= kappa * v[i];
        // A <- A - v p* - p v*
        for (int i = k + 1; i < n; ++i) {
            cplx* ri = a.row(i);
            const cplx vi = v[i];
            const cplx pi = p[i];
            for (int j = k + 1; j < n; ++j) {
                ri[j] -= vi * std::conj(p[j]) + pi * std::conj(v[j]);
            }
        }
        e[k] = xnorm;  // |alpha|
        a(k + 1, k) = alpha;
    }
    if (n > 1) e[n - 2] = cabs(a(n - 1, n - 2));
    for (int i = 0; i < n; ++i) d[i] = a(i, i).real();

    // Implicit-shift QL on the real symmetric tridiagonal (d, e).
    std::vector<double> ee(n, 0.0);
    for (int i = 0; i < n - 1; ++i) ee[i] = e[i];
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int mm;
        do {
            for (mm = l; mm < n - 1; ++mm) {
                const double dd = std::fabs(d[mm]) + std::fabs(d[mm + 1]);
                if (std::fabs(ee[mm]) <= 1e-16 * dd) break;
            }
            if (mm != l) {
                if (iter++ == 60) {
                    throw ConvergenceError("hermitian_eigenvalues: QL iteration cap", iter);
                }
                double g = (d[l + 1] - d[l]) / (2.0 * ee[l]);
                double r = std::hypot(g, 1.0);
                g = d[mm] - d[l] + ee[l] / (g + (g >= 0.0 ? r : -r));
                double s = 1.0, c = 1.0, pp = 0.0;
                int i = mm - 1;
                bool underflow = false;
                for (; i >= l; --i) {
                    double f = s * ee[i];
                    const double b = c * ee[i];
                    r = std::hypot(f, g);
                    ee[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= pp;
                        ee[mm] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - pp;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    pp = s * r;
                    d[i + 1] = g + pp;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= pp;
                ee[l] = g;
                ee[mm] = 0.0;
            }
        } while (mm != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace lab
