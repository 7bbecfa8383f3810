#include "lab/matrix.hpp"

namespace lab {

MatrixC MatrixC::gram() const {
    const int n = cols_;
    MatrixC g(n, n);
    // Accumulate rank-one contributions row by row; the inner loop walks a
    // contiguous row of the source.
    for (int k = 0; k < rows_; ++k) {
        const cplx* rk = row(k);
        for (int i = 0; i < n; ++i) {
            const cplx ci = std::conj(rk[i]);
            if (ci == cplx(0.0, 0.0)) continue;
            cplx* gi = g.row(i);
            for (int j = i; j < n; ++j) gi[j] += ci * rk[j];
        }
    }
    for (int i = 0; i < n; ++i) {
        g(i, i) = cplx(g(i, i).real(), 0.0);
        for (int j = i + 1; j < n; ++j) g(j, i) = std::conj(g(i, j));
    }
    return g;
}

std::vector<cplx> MatrixC::apply(const std::vector<cplx>& x) const {
    if (static_cast<int>(x.size()) != cols_) {
        throw std::invalid_argument("MatrixC::apply: dimension mismatch");
    }
    std::vector<cplx> y(rows_);
    for (int i = 0; i < rows_; ++i) {
        const cplx* ri = row(i);
        cplx s = 0.0;
        for (int j = 0; j < cols_; ++j) s += ri[j] * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<cplx> MatrixC::apply_adjoint(const std::vector<cplx>& x) const {
    if (static_cast<int>(x.size()) != rows_) {
        throw std::invalid_argument("MatrixC::apply_adjoint: dimension mismatch");
    }
    std::vector<cplx> y(cols_);
    for (int i = 0; i < rows_; ++i) {
        const cplx xi = x[i];
        if (xi == cplx(0.0, 0.0)) continue;
        const cplx* ri = row(i);
        for (int j = 0; j < cols_; ++j) y[j] += std::conj(ri[j]) * xi;
    }
    return y;
}

MatrixC matmul(const MatrixC& a, const MatrixC& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
    MatrixC c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        cplx* ci = c.row(i);
        const cplx* ai = a.row(i);
        for (int k = 0; k < a.cols(); ++k) {
            const cplx aik = ai[k];
            if (aik == cplx(0.0, 0.0)) continue;
            const cplx* bk = b.row(k);
            for (int j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

}  // namespace lab
