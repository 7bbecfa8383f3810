#pragma once

#include "lab/ensembles.hpp"
#include "lab/lcd.hpp"

namespace lab {

// One kernel-structure probe trial: the unit vector annihilated (or nearly
// annihilated) by the shifted scaled draw, classified by the LCD taxonomy.
struct KernelProbeRow {
    double smin = 0.0;           // ||B v||
    double residual_rel = 0.0;   // | ||Bv|| - smin | / smin for the proxy path
    VectorTaxonomy taxonomy;
};

// Extracts v from the smallest-singular-vector proxy of B = A/sqrt(np) - wI,
// or, with literal_kernel, the exact null vector of the (n-1) x n matrix made
// of the last n-1 columns of (A + D)^T.
KernelProbeRow kernel_probe_trial(const EnsembleSpec& spec, std::uint64_t trial, cplx w,
                                  int m_large, const LcdParams& params, double comp_delta,
                                  double dom_alpha, bool literal_kernel);

// ceil(log(1/(8p)) / log(sqrt(pn))), clamped at zero; reported with probe runs.
int ell0(double p, int n);

}  // namespace lab
