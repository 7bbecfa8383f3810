#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lab {

using cplx = std::complex<double>;

// Dense complex matrix, row-major. Everything downstream (ensembles, shifts,
// factorizations) lives in this one container; desk scale is n <= 4096 so
// O(n^2) storage is the deliberate choice.
class MatrixC {
public:
    MatrixC() : rows_(0), cols_(0) {}
    MatrixC(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {
        if (rows <= 0 || cols <= 0) {
            throw std::invalid_argument("MatrixC: dimensions must be positive");
        }
    }

    static MatrixC identity(int n) {
        MatrixC m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * cols_ + j];
    }

    cplx* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }
    const cplx* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * cols_; }

    std::vector<cplx>& data() { return a_; }
    const std::vector<cplx>& data() const { return a_; }

    double frob_sq() const {
        double s = 0.0;
        for (const cplx& v : a_) s += std::norm(v);
        return s;
    }

    bool all_finite() const {
        for (const cplx& v : a_) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        }
        return true;
    }

    MatrixC adjoint() const {
        MatrixC t(cols_, rows_);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
        }
        return t;
    }

    // A* A, exploiting Hermitian symmetry of the product.
    MatrixC gram() const;

    // y = A x
    std::vector<cplx> apply(const std::vector<cplx>& x) const;
    // y = A* x
    std::vector<cplx> apply_adjoint(const std::vector<cplx>& x) const;

private:
    int rows_, cols_;
    std::vector<cplx> a_;
};

MatrixC matmul(const MatrixC& a, const MatrixC& b);

}  // namespace lab
