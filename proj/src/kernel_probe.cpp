#include "lab/kernel_probe.hpp"

#include <cmath>

#include "lab/linalg.hpp"

namespace lab {

int ell0(double p, int n) {
    const double denom = std::log(std::sqrt(p * n));
    if (denom <= 0.0) return 0;
    const double v = std::ceil(std::log(1.0 / (8.0 * p)) / denom);
    return v > 0.0 ? static_cast<int>(v) : 0;
}

KernelProbeRow kernel_probe_trial(const EnsembleSpec& spec, std::uint64_t trial, cplx w,
                                  int m_large, const LcdParams& params, double comp_delta,
                                  double dom_alpha, bool literal_kernel) {
    const int n = spec.n;
    const MatrixC a = sample_sparse_matrix(spec, trial);
    const double scale = ensemble_scale(spec);
    const MatrixC b = shifted(a, w, scale);

    KernelProbeRow row;
    SingularPair pair;
    if (literal_kernel) {
        // Last n-1 columns of (A + D)^T, i.e. the rows of A + D beyond the
        // first, scaled like the square probe for comparability.
        MatrixC bd(n - 1, n);
        for (int i = 1; i < n; ++i) {
            for (int j = 0; j < n; ++j) bd(i - 1, j) = b(j, i);
        }
        pair = smallest_singular_pair(bd);
        row.smin = pair.value;
        row.residual_rel = 0.0;  // exact-null path has no proxy gap to audit
    } else {
        pair = smallest_singular_pair(b);
        row.smin = pair.value;
        double bv = 0.0;
        const auto image = b.apply(pair.vector);
        for (const cplx& x : image) bv += std::norm(x);
        bv = std::sqrt(bv);
        row.residual_rel = row.smin > 0.0 ? std::fabs(bv - row.smin) / row.smin : 0.0;
    }
    row.taxonomy = classify(pair.vector, m_large, params, comp_delta, dom_alpha);
    return row;
}

}  // namespace lab
