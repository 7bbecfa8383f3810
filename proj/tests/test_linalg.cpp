#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "lab/ensembles.hpp"
#include "lab/linalg.hpp"
#include "lab/rng.hpp"

using namespace lab;

namespace {

MatrixC random_complex(int rows, int cols, std::uint64_t seed) {
    Philox rng(seed, 0);
    MatrixC m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const auto g = rng.next_gaussian_pair();
            m(i, j) = cplx(g[0], g[1]);
        }
    }
    return m;
}

// O(n!) cofactor-expansion determinant; the independent oracle for n <= 6.
cplx cofactor_det(const MatrixC& m) {
    const int n = m.rows();
    if (n == 1) return m(0, 0);
    cplx det = 0.0;
    double sign = 1.0;
    for (int k = 0; k < n; ++k) {
        MatrixC minor(n - 1, n - 1);
        for (int i = 1; i < n; ++i) {
            int cj = 0;
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                minor(i - 1, cj++) = m(i, j);
            }
        }
        det += sign * m(0, k) * cofactor_det(minor);
        sign = -sign;
    }
    return det;
}

double vec_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("lu_logabsdet basics and cofactor oracle") {
    CHECK(lu_logabsdet(MatrixC::identity(3)) == doctest::Approx(0.0));

    MatrixC d(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = cplx(0.0, 3.0);
    CHECK(lu_logabsdet(d) == doctest::Approx(std::log(6.0)));

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const MatrixC m = random_complex(5, 5, seed);
        const double expected = std::log(std::abs(cofactor_det(m)));
        CHECK(lu_logabsdet(m) == doctest::Approx(expected).epsilon(1e-9));
    }

    CHECK(std::isinf(lu_logabsdet(MatrixC(4, 4))));
    CHECK(lu_logabsdet(MatrixC(4, 4)) < 0.0);

    MatrixC rect(2, 3);
    CHECK_THROWS(lu_logabsdet(rect));
}

TEST_CASE("lu solve recovers the right-hand side") {
    const MatrixC m = random_complex(12, 12, 77);
    const LuFactor f = lu_factor(m);
    REQUIRE_FALSE(f.singular);
    std::vector<cplx> b(12);
    Philox rng(5, 1);
    for (auto& x : b) x = cplx(rng.next_gaussian(), rng.next_gaussian());
    const auto x = f.solve(b);
    const auto back = m.apply(x);
    double err = 0.0;
    for (int i = 0; i < 12; ++i) err += std::norm(back[i] - b[i]);
    CHECK(std::sqrt(err) < 1e-10 * vec_norm(b) * 1e3);
}

TEST_CASE("jacobi singular values: fixed cases") {
    MatrixC nilpotent(2, 2);
    nilpotent(0, 1) = 1.0;
    auto sv = singular_values(nilpotent);
    CHECK(sv[0] == doctest::Approx(1.0));
    CHECK(sv[1] == doctest::Approx(0.0));

    sv = singular_values(MatrixC::identity(5));
    for (double s : sv) CHECK(s == doctest::Approx(1.0));
}

TEST_CASE("jacobi squares match the Hermitian path on M*M") {
    const MatrixC m = random_complex(4, 4, 3);
    const auto sv = singular_values(m);
    const auto lam = hermitian_eigenvalues(m.gram());  // ascending
    REQUIRE(sv.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(sv[i] * sv[i] == doctest::Approx(lam[3 - i]).epsilon(1e-8));
    }
}

TEST_CASE("sum of squared singular values is the Frobenius norm") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int n = 2 + static_cast<int>(seed % 63);
        const MatrixC m = random_complex(n, n, 1000 + seed);
        const auto sv = singular_values(m);
        double s2 = 0.0;
        for (double s : sv) {
            CHECK(s >= 0.0);
            s2 += s * s;
        }
        CHECK(s2 == doctest::Approx(m.frob_sq()).epsilon(1e-8));
        CHECK(std::is_sorted(sv.rbegin(), sv.rend()));
    }
}

TEST_CASE("singular values are permutation invariant") {
    const MatrixC m = random_complex(9, 9, 42);
    Philox rng(43, 0);
    std::vector<int> pr(9), pc(9);
    for (int i = 0; i < 9; ++i) pr[i] = pc[i] = i;
    for (int i = 8; i > 0; --i) {
        std::swap(pr[i], pr[rng.next_u64() % (i + 1)]);
        std::swap(pc[i], pc[rng.next_u64() % (i + 1)]);
    }
    MatrixC permuted(9, 9);
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) permuted(i, j) = m(pr[i], pc[j]);
    }
    const auto a = singular_values(m);
    const auto b = singular_values(permuted);
    for (int i = 0; i < 9; ++i) CHECK(std::fabs(a[i] - b[i]) < 1e-10);
}

TEST_CASE("rectangular singular values match square embedding") {
    const MatrixC wide = random_complex(5, 8, 9);
    const auto sv = singular_values(wide);
    CHECK(sv.size() == 5);
    const auto svt = singular_values(wide.adjoint());
    for (int i = 0; i < 5; ++i) CHECK(sv[i] == doctest::Approx(svt[i]).epsilon(1e-10));
}

TEST_CASE("gram_singular_values agrees with jacobi") {
    const MatrixC m = random_complex(24, 24, 12);
    const auto fast = gram_singular_values(m);
    const auto exact = singular_values(m);
    REQUIRE(fast.size() == exact.size());
    for (std::size_t i = 0; i < fast.size(); ++i) {
        CHECK(std::fabs(fast[i] - exact[i]) < 1e-8 * (1.0 + exact[0]));
    }
}

TEST_CASE("smallest singular pair: fixed cases") {
    MatrixC d(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 1e-3;
    auto p = smallest_singular_pair(d);
    CHECK(p.value == doctest::Approx(1e-3).epsilon(1e-9));
    CHECK(std::abs(p.vector[1]) == doctest::Approx(1.0).epsilon(1e-9));

    MatrixC ones(2, 2);
    ones(0, 0) = ones(0, 1) = ones(1, 0) = ones(1, 1) = 1.0;
    p = smallest_singular_pair(ones);
    CHECK(p.value < 1e-12);
    CHECK(std::abs(p.vector[0] + p.vector[1]) < 1e-9);
    CHECK(std::abs(std::abs(p.vector[0]) - 1.0 / std::sqrt(2.0)) < 1e-9);

    p = smallest_singular_pair(MatrixC(3, 3));
    CHECK(p.value == 0.0);
    CHECK(p.vector[0] == cplx(1.0, 0.0));
}

TEST_CASE("smallest singular pair matches full SVD on random matrices") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const MatrixC m = random_complex(50, 50, 500 + seed);
        const auto p = smallest_singular_pair(m);
        const auto sv = singular_values(m);
        CHECK(p.value == doctest::Approx(sv.back()).epsilon(1e-9));
        // contract: ||Mv|| within 1e-6 relative of s_min
        const double mv = vec_norm(m.apply(p.vector));
        CHECK(mv == doctest::Approx(p.value).epsilon(1e-6));
        double vnorm = 0.0;
        for (const auto& x : p.vector) vnorm += std::norm(x);
        CHECK(std::sqrt(vnorm) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("smallest singular pair on (n-1) x n returns a kernel vector") {
    const MatrixC m = random_complex(15, 16, 8);
    const auto p = smallest_singular_pair(m);
    CHECK(p.value < 1e-10);
    CHECK(vec_norm(m.apply(p.vector)) < 1e-10);
}

TEST_CASE("largest singular value via lanczos matches jacobi") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const MatrixC m = random_complex(40, 40, 900 + seed);
        const auto sv = singular_values(m);
        CHECK(largest_singular_value(m) == doctest::Approx(sv[0]).epsilon(1e-8));
    }
    CHECK(largest_singular_value(MatrixC(5, 5)) == 0.0);
}

TEST_CASE("eigenvalues: closed forms") {
    MatrixC d(2, 2);
    d(0, 0) = cplx(2.0, 1.0);
    d(1, 1) = cplx(-0.5, 3.0);
    auto eig = eigenvalues(d);
    std::sort(eig.begin(), eig.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });
    CHECK(std::abs(eig[0] - cplx(-0.5, 3.0)) < 1e-12);
    CHECK(std::abs(eig[1] - cplx(2.0, 1.0)) < 1e-12);

    MatrixC rot(2, 2);
    rot(0, 1) = 1.0;
    rot(1, 0) = -1.0;
    eig = eigenvalues(rot);
    std::sort(eig.begin(), eig.end(),
              [](cplx a, cplx b) { return a.imag() < b.imag(); });
    CHECK(std::abs(eig[0] - cplx(0.0, -1.0)) < 1e-10);
    CHECK(std::abs(eig[1] - cplx(0.0, 1.0)) < 1e-10);

    // companion matrix of z^3 - 1
    MatrixC comp(3, 3);
    comp(0, 2) = 1.0;
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    eig = eigenvalues(comp);
    std::sort(eig.begin(), eig.end(), [](cplx a, cplx b) {
        return std::arg(a) < std::arg(b);
    });
    const double c3 = std::cos(2.0 * M_PI / 3.0);
    const double s3 = std::sin(2.0 * M_PI / 3.0);
    CHECK(std::abs(eig[0] - cplx(c3, -s3)) < 1e-10);
    CHECK(std::abs(eig[1] - cplx(1.0, 0.0)) < 1e-10);
    CHECK(std::abs(eig[2] - cplx(c3, s3)) < 1e-10);
}

TEST_CASE("eigenvalue trace and determinant identities") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const int n = 6 + static_cast<int>(seed) * 5;
        const MatrixC m = random_complex(n, n, 7000 + seed);
        const auto eig = eigenvalues(m);
        REQUIRE(static_cast<int>(eig.size()) == n);

        cplx trace = 0.0;
        for (int i = 0; i < n; ++i) trace += m(i, i);
        cplx esum = 0.0;
        double logprod = 0.0;
        for (const auto& l : eig) {
            esum += l;
            logprod += std::log(std::abs(l));
        }
        CHECK(std::abs(esum - trace) < 1e-8 * std::sqrt(m.frob_sq()));
        CHECK(logprod == doctest::Approx(lu_logabsdet(m)).epsilon(1e-6));
    }
}

TEST_CASE("eigenvalues respect the size cap") {
    CHECK_THROWS(eigenvalues(MatrixC(2049, 2049)));
}

TEST_CASE("hessenberg form preserves the shifted determinant") {
    const MatrixC m = random_complex(20, 20, 31);
    const MatrixC h = hessenberg_form(m);
    for (int i = 2; i < 20; ++i) {
        for (int j = 0; j < i - 1; ++j) CHECK(std::abs(h(i, j)) < 1e-12);
    }
    for (const cplx w : {cplx(0.3, 0.4), cplx(-1.0, 0.1), cplx(0.0, 0.0)}) {
        const double via_h = hessenberg_shifted_logabsdet(h, w);
        MatrixC shifted_m = m;
        for (int i = 0; i < 20; ++i) shifted_m(i, i) -= w;
        CHECK(via_h == doctest::Approx(lu_logabsdet(shifted_m)).epsilon(1e-9));
    }
}

TEST_CASE("hermitization spectrum is plus-minus singular values") {
    MatrixC one(1, 1);
    one(0, 0) = 3.0;
    const MatrixC h1 = hermitization(one);
    auto lam = hermitian_eigenvalues(h1);
    CHECK(lam[0] == doctest::Approx(-3.0));
    CHECK(lam[1] == doctest::Approx(3.0));

    const MatrixC z = hermitization(MatrixC(4, 4));
    CHECK(z.frob_sq() == 0.0);

    const MatrixC m = random_complex(8, 8, 64);
    const MatrixC h = hermitization(m);
    lam = hermitian_eigenvalues(h);
    const auto sv = singular_values(m);
    for (int i = 0; i < 8; ++i) {
        CHECK(lam[15 - i] == doctest::Approx(sv[i]).epsilon(1e-8));
        CHECK(lam[i] == doctest::Approx(-sv[i]).epsilon(1e-8));
    }
    // symmetry about zero
    for (int i = 0; i < 16; ++i) CHECK(lam[i] + lam[15 - i] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("hermitian eigenvalues: fixed and moment identities") {
    MatrixC d(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    d(2, 2) = 3.0;
    auto lam = hermitian_eigenvalues(d);
    CHECK(lam[0] == doctest::Approx(1.0));
    CHECK(lam[1] == doctest::Approx(2.0));
    CHECK(lam[2] == doctest::Approx(3.0));

    MatrixC pauli(2, 2);
    pauli(0, 1) = 1.0;
    pauli(1, 0) = 1.0;
    lam = hermitian_eigenvalues(pauli);
    CHECK(lam[0] == doctest::Approx(-1.0));
    CHECK(lam[1] == doctest::Approx(1.0));

    // random Hermitian 6x6: trace and trace of square
    MatrixC m = random_complex(6, 6, 11);
    MatrixC herm(6, 6);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) herm(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    }
    lam = hermitian_eigenvalues(herm);
    double tr = 0.0, tr2 = 0.0;
    for (int i = 0; i < 6; ++i) tr += herm(i, i).real();
    const MatrixC sq = matmul(herm, herm);
    for (int i = 0; i < 6; ++i) tr2 += sq(i, i).real();
    double ls = 0.0, ls2 = 0.0;
    for (double l : lam) {
        ls += l;
        ls2 += l * l;
    }
    CHECK(ls == doctest::Approx(tr).epsilon(1e-9));
    CHECK(ls2 == doctest::Approx(tr2).epsilon(1e-9));

    // non-Hermitian input is rejected
    m(0, 1) = 5.0;
    m(1, 0) = 0.0;
    CHECK_THROWS(hermitian_eigenvalues(m));
}

TEST_CASE("eigenvalues of a sparse draw land near the right scale") {
    EnsembleSpec s;
    s.kind = EnsembleKind::SparseProduct;
    s.n = 64;
    s.p = 0.5;
    s.entry_law = {LawKind::Rademacher, 0.5};
    s.seed = 17;
    const MatrixC a = sample_sparse_matrix(s);
    const MatrixC b = shifted(a, 0.0, ensemble_scale(s));
    const auto eig = eigenvalues(b);
    double maxmod = 0.0;
    for (const auto& l : eig) maxmod = std::max(maxmod, std::abs(l));
    CHECK(maxmod < 2.0);  // spectral radius ~ 1 at this scale
}
