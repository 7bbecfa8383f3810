// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "lab/concentration.hpp"
#include "lab/experiments.hpp"
#include "lab/kernel_probe.hpp"
#include "lab/lcd.hpp"
#include "lab/linalg.hpp"
#include "lab/parallel.hpp"
#include "lab/rng.hpp"
#include "lab/spectra.hpp"

using namespace lab;

namespace {

int g_threads = 1;

struct Check {
    std::string label;
    bool pass;
    std::string detail;
};

std::vector<Check> g_checks;

void expect(bool pass, const std::string& label, const std::string& detail = "") {
    g_checks.push_back({label, pass, detail});
}

MatrixC random_complex(int n, std::uint64_t seed) {
    Philox rng(seed, 0);
    MatrixC m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto g = rng.next_gaussian_pair();
            m(i, j) = cplx(g[0], g[1]);
        }
    }
    return m;
}

std::vector<cplx> random_unit(int n, std::uint64_t seed) {
    Philox rng(seed, 1);
    std::vector<cplx> z(n);
    double nrm = 0.0;
    for (auto& v : z) {
        const auto g = rng.next_gaussian_pair();
        v = cplx(g[0], g[1]);
        nrm += std::norm(v);
    }
    nrm = std::sqrt(nrm);
    for (auto& v : z) v /= nrm;
    return z;
}

// ---------------------------------------------------------------------------

void criterion_exact_identities() {
    Philox dims(2025, 0);
    bool frob_ok = true, herm_ok = true, logdet_ok = true, trace_ok = true, det_ok = true;
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 2 + static_cast<int>(dims.next_u64() % 63);
        const MatrixC m = random_complex(n, 5000 + rep);

        const auto sv = singular_values(m);
        double s2 = 0.0, logsum = 0.0;
        for (double s : sv) {
            s2 += s * s;
            logsum += std::log(s);
        }
        if (std::fabs(s2 - m.frob_sq()) > 1e-8 * m.frob_sq()) frob_ok = false;

        const auto lam = hermitian_eigenvalues(hermitization(m));
        for (int i = 0; i < n; ++i) {
            if (std::fabs(lam[2 * n - 1 - i] - sv[i]) > 1e-8 * (1.0 + sv[0])) herm_ok = false;
            if (std::fabs(lam[i] + sv[i]) > 1e-8 * (1.0 + sv[0])) herm_ok = false;
        }

        const double ld = lu_logabsdet(m);
        if (std::fabs(ld - logsum) > 1e-6 * std::max(1.0, std::fabs(logsum))) {
            logdet_ok = false;
        }

        const auto eig = eigenvalues(m);
        cplx tr = 0.0, esum = 0.0;
        double elog = 0.0;
        for (int i = 0; i < n; ++i) tr += m(i, i);
        for (const cplx& l : eig) {
            esum += l;
            elog += std::log(std::abs(l));
        }
        if (std::abs(esum - tr) > 1e-8 * std::sqrt(m.frob_sq())) trace_ok = false;
        if (std::fabs(elog - ld) > 1e-6 * std::max(1.0, std::fabs(ld))) det_ok = false;
    }
    expect(frob_ok, "sum s_i^2 = ||M||_F^2 (100 matrices, 1e-8 rel)");
    expect(herm_ok, "hermitization spectrum = {+-s_i} (1e-8)");
    expect(logdet_ok, "lu_logabsdet = sum log s_i (1e-6 rel)");
    expect(trace_ok, "sum lambda_i = tr M (1e-8 * ||M||_F)");
    expect(det_ok, "sum log|lambda_i| = log|det M| (1e-6 rel)");
}

void criterion_girko_sanity() {
    // zero matrix: delta at the origin
    const auto zero_grid = girko_density_grid(MatrixC(64, 64), 1.0, {0.1, 1.5});
    double total = 0.0, near0 = 0.0;
    for (std::size_t i = 0; i < zero_grid.nodes.size(); ++i) {
        if (zero_grid.boundary[i]) continue;
        const double mass = zero_grid.values[i] * 0.1 * 0.1;
        total += mass;
        if (std::abs(zero_grid.nodes[i]) <= 0.2 + 1e-12) near0 += mass;
    }
    expect(total > 0.0 && near0 / total >= 0.95,
           "zero matrix reconstructs a point mass at 0 (>=95% within 2h)");

    // complex Ginibre baseline density
    EnsembleSpec spec;
    spec.kind = EnsembleKind::GinibreComplex;
    spec.n = 512;
    spec.seed = 7;
    std::vector<DensityGrid> grids(10);
    parallel_trials(10, g_threads, [&](int t) {
        grids[t] = girko_density_grid(sample_matrix(spec, t), ensemble_scale(spec),
                                      {0.1, 1.5});
    });
    int interior = 0, ok = 0;
    for (std::size_t i = 0; i < grids[0].nodes.size(); ++i) {
        if (grids[0].boundary[i] || std::abs(grids[0].nodes[i]) > 0.8) continue;
        double avg = 0.0;
        for (const auto& g : grids) avg += g.values[i];
        avg /= grids.size();
        ++interior;
        if (std::fabs(avg - 1.0 / M_PI) < 0.15) ++ok;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d/%d interior nodes within 0.15 of 1/pi", ok,
                  interior);
    expect(interior > 0 && static_cast<double>(ok) / interior >= 0.9,
           "Ginibre n=512 density near 1/pi on >=90% of interior nodes", buf);
}

void criterion_circular_law() {
    ExperimentConfig c;
    c.experiment = "circular-law";
    c.ensemble.kind = EnsembleKind::SparseProduct;
    c.ensemble.n = 1024;
    c.ensemble.p = 0.2;
    c.ensemble.entry_law = {LawKind::Rademacher, 0.5};
    c.ensemble.seed = 42;
    c.trials = 20;
    c.threads = g_threads;
    const auto report = run_experiment(c);
    const double ks = report.summary.at("mean_radial_ks");
    const double outside = report.summary.at("mean_outside_fraction");
    const double cmp = report.summary.at("ginibre_compare_radial_ks");
    expect(ks < 0.05, "sparse rademacher mean radial KS < 0.05",
           "value " + format_double(ks));
    expect(outside < 0.01, "outside-disk fraction < 1%", "value " + format_double(outside));
    expect(cmp < 0.03, "sparse-vs-Ginibre radial KS < 0.03", "value " + format_double(cmp));
}

void criterion_support_edge() {
    expect(std::fabs(lambda_plus(0.0) - 4.0) < 1e-14, "lambda_plus(0) = 4 exactly");
    expect(std::fabs(lambda_plus(cplx(1.0, 0.0)) - 6.75) < 1e-14,
           "lambda_plus(|w|=1) = 6.75 exactly");

    EnsembleSpec spec;
    spec.kind = EnsembleKind::SparseProduct;
    spec.n = 1024;
    spec.p = 0.2;
    spec.entry_law = {LawKind::Rademacher, 0.5};
    spec.seed = 99;
    const double scale = ensemble_scale(spec);
    for (const cplx w : {cplx(0.0, 0.0), cplx(0.5, 0.0), cplx(0.5, 0.5)}) {
        const double edge = std::sqrt(lambda_plus(w));
        std::vector<int> ok(50, 0);
        parallel_trials(50, g_threads, [&](int t) {
            const double top =
                largest_singular_value(shifted(sample_sparse_matrix(spec, t), w, scale));
            ok[t] = std::fabs(top - edge) <= 0.15 ? 1 : 0;
        });
        int hits = 0;
        for (int v : ok) hits += v;
        char buf[128];
        std::snprintf(buf, sizeof(buf), "w=(%g,%g): %d/50 within 0.15 of sqrt(lambda_+)",
                      w.real(), w.imag(), hits);
        expect(hits >= 45, "largest singular value at the predicted edge", buf);
    }
}

void criterion_smin_scaling() {
    ExperimentConfig c;
    c.experiment = "smin-scaling";
    c.ensemble.kind = EnsembleKind::SparseProduct;
    c.ensemble.p = 0.3;
    c.ensemble.n = 1024;
    c.ensemble.entry_law = {LawKind::Rademacher, 0.5};
    c.ensemble.seed = 31;
    c.w = cplx(0.5, 0.5);
    c.trials = 200;
    c.n_list = {256, 512, 1024};
    c.epsilons = {0.05, 0.1, 0.2, 0.4};
    c.threads = g_threads;
    const auto report = run_experiment(c);
    for (const auto& v : report.verdicts) {
        expect(v.pass, "smin scaling: " + v.criterion, "value " + format_double(v.value));
    }
}

void criterion_intermediate() {
    ExperimentConfig c;
    c.experiment = "intermediate-sv";
    c.ensemble.kind = EnsembleKind::SparseProduct;
    c.ensemble.n = 1024;
    c.ensemble.p = 0.2;
    c.ensemble.entry_law = {LawKind::Rademacher, 0.5};
    c.ensemble.seed = 55;
    c.w = cplx(0.5, 0.5);
    c.trials = 50;
    c.threads = g_threads;
    const auto report = run_experiment(c);
    const double frac = report.summary.at("fraction_above_floor");
    expect(frac >= 0.95, "min_i s_{n-i}/(i/n) >= 0.01 in >=95% of trials",
           "fraction " + format_double(frac));
}

void criterion_distance() {
    const auto row = subspace_distance_experiment(1000, 500, 0.1,
                                                  {LawKind::Rademacher, 0.5}, 500, 2024);
    expect(row.mean_ratio >= 0.95 && row.mean_ratio <= 1.05,
           "mean dist^2/(p(n-d)) in [0.95, 1.05]",
           "value " + format_double(row.mean_ratio));
}

void criterion_zero_column() {
    const auto row = zero_column_barrier_experiment(10000, 400, 2024);
    const double target = 1.0 - std::exp(-1.0);
    expect(std::fabs(row.fraction_with_zero_column - target) <= 0.06,
           "zero-column fraction within 0.06 of 1 - 1/e",
           "value " + format_double(row.fraction_with_zero_column));
}

void criterion_lcd_suite() {
    // Lemma: D1(x) >= 1/(2 ||x||_inf), paper constants, any L >= 1.
    {
        int violations = 0;
        for (int rep = 0; rep < 200; ++rep) {
            const int m = 2 + rep % 31;
            Philox rng(rep, 3);
            std::vector<double> x(m);
            double xinf = 0.0;
            for (auto& v : x) {
                v = rng.next_gaussian();
                xinf = std::max(xinf, std::fabs(v));
            }
            if (xinf == 0.0) continue;
            LcdParams params;
            params.L = 1.0 + (rep % 3);
            params.cap = 5000.0;
            params.grid_step = 1e-2;
            if (lcd_d1(x, params).value < 1.0 / (2.0 * xinf) - 1e-6) ++violations;
        }
        expect(violations == 0, "D1 lower bound 1/(2||x||_inf): zero violations in 200");
    }

    // Lemma: D1_hat(x) >= D2(z), censoring aware, paper and scaled constants.
    {
        int violations = 0;
        for (int rep = 0; rep < 200; ++rep) {
            const LcdParams params =
                rep % 2 ? LcdParams::paper(0.3) : LcdParams::scaled_test();
            const int m = 2 + rep % 7;
            const auto z = random_unit(m, 40000 + rep);
            std::vector<double> x(m);
            for (int i = 0; i < m; ++i) x[i] = z[i].real();
            double xn = 0.0;
            for (double v : x) xn += v * v;
            if (xn == 0.0) continue;
            const auto dh = lcd_d1_hat(x, params);
            const auto d2 = lcd_d2(z, params);
            if (dh.value < d2.value - 3.0 * params.grid_step - 1e-6) ++violations;
        }
        expect(violations == 0, "D1_hat >= D2: zero violations in 200 (censoring-aware)");
    }

    // Sandwich d D2 <= Delta <= D2, uncensored cases.
    {
        int violations = 0, seen = 0;
        for (int rep = 0; rep < 200; ++rep) {
            const LcdParams params =
                rep % 2 ? LcdParams::paper(0.3) : LcdParams::scaled_test();
            const int m = 2 + rep % 7;
            const auto z = random_unit(m, 50000 + rep);
            const auto d2 = lcd_d2(z, params);
            if (d2.censored) continue;
            const auto delta = delta_aux(z, params);
            if (delta.est.censored) continue;
            ++seen;
            const double d = decorrelation(z);
            if (d * d2.value > delta.est.value * (1.0 + 1e-3) + 1e-9) ++violations;
            if (delta.est.value > d2.value * (1.0 + 1e-3) + 1e-9) ++violations;
        }
        expect(violations == 0 && seen >= 100,
               "sandwich d*D2 <= Delta <= D2: zero violations",
               std::to_string(seen) + " uncensored cases");
    }

    // Essentially real: D1(phi) <= 2 D2(z_small normalized).
    {
        int violations = 0, seen = 0;
        const LcdParams params = LcdParams::paper(0.3);
        for (int rep = 0; rep < 200; ++rep) {
            Philox rng(rep, 13);
            const int n = 24;
            std::vector<cplx> z(n);
            double nrm = 0.0;
            for (int i = 0; i < n; ++i) {
                const double base = rng.next_gaussian();
                z[i] = cplx(base, 0.08 * base + 2e-3 * rng.next_gaussian());
                nrm += std::norm(z[i]);
            }
            nrm = std::sqrt(nrm);
            for (auto& v : z) v /= nrm;
            const auto tax = classify(z, 4, params);
            if (tax.cls != VectorClass::EssentiallyReal) continue;
            ++seen;
            const auto d1 = lcd_d1(tax.phi, params);
            if (d1.value > 2.0 * tax.lcd2_small.value + 3.0 * params.grid_step + 1e-6) {
                ++violations;
            }
        }
        expect(violations == 0 && seen >= 100,
               "essentially real: D1(phi) <= 2 D2, zero violations",
               std::to_string(seen) + " essentially-real cases");
    }

    // Non-dominated implies D2(z_small normalized) >= alpha sqrt(M)/2.
    {
        int violations = 0;
        const int n = 64, M = 8;
        const double alpha_star = 0.5;
        for (int rep = 0; rep < 200; ++rep) {
            const LcdParams params =
                rep % 2 ? LcdParams::paper(0.3) : LcdParams::scaled_test();
            Philox rng(rep, 23);
            std::vector<cplx> z(n);
            for (int i = 0; i < M; ++i) z[i] = 3.0 * std::polar(1.0, rng.next_uniform());
            for (int i = M; i < n; ++i) {
                z[i] = 0.5 * std::polar(1.0, 2.0 * M_PI * rng.next_uniform());
            }
            double nrm = 0.0;
            for (const auto& v : z) nrm += std::norm(v);
            nrm = std::sqrt(nrm);
            for (auto& v : z) v /= nrm;
            if (is_dominated(z, M, alpha_star)) continue;
            const auto split = small_split(z, M);
            std::vector<cplx> zs = split.z_small;
            double sn = 0.0;
            for (const auto& v : zs) sn += std::norm(v);
            sn = std::sqrt(sn);
            for (auto& v : zs) v /= sn;
            const auto d2 = lcd_d2(zs, params);
            if (d2.value <
                alpha_star * std::sqrt(static_cast<double>(M)) / 2.0 - 3.0 * params.grid_step) {
                ++violations;
            }
        }
        expect(violations == 0, "non-dominated => D2 >= alpha sqrt(M)/2: zero violations");
    }

    // Brute-force oracle equivalence at m <= 4 (pinned polar discretization).
    {
        LcdParams params = LcdParams::scaled_test();
        params.angle_refine = false;
        auto log1 = [](double y) { return y >= 2.718281828459045 ? std::log(y) : 0.0; };
        int mismatches = 0;
        for (int rep = 0; rep < 50; ++rep) {
            const int m = 2 + rep % 3;
            const auto z = random_unit(m, 60000 + rep);
            // dense radial scan at every implementation angle
            double oracle = params.cap;
            for (int k = 0; k < params.angle_count; ++k) {
                const double phi = M_PI * k / params.angle_count;
                std::vector<double> u(m);
                double unorm = 0.0;
                for (int i = 0; i < m; ++i) {
                    u[i] = std::cos(phi) * z[i].real() + std::sin(phi) * z[i].imag();
                    unorm += u[i] * u[i];
                }
                unorm = std::sqrt(unorm);
                if (unorm == 0.0) continue;
                auto qual = [&](double rho) {
                    double dist = 0.0;
                    for (int i = 0; i < m; ++i) {
                        const double y = rho * u[i];
                        const double r = y - std::nearbyint(y);
                        dist += r * r;
                    }
                    dist = std::sqrt(dist);
                    const double thr = params.d2.thresh_coeff * params.L *
                                       std::sqrt(log1(rho * unorm /
                                                      (params.d2.norm_divisor * params.L)));
                    return dist + 1e-12 < thr;
                };
                // threshold activation radius: the infimum can sit exactly there
                const double act =
                    params.d2.norm_divisor * params.L * 2.718281828459045 / unorm;
                if (act < oracle && qual(act)) oracle = act;
                for (long q = 1; static_cast<double>(q) * 1e-3 < oracle; ++q) {
                    const double rho = static_cast<double>(q) * 1e-3;
                    if (rho <= act) continue;
                    if (qual(rho)) {
                        oracle = std::min(oracle, rho);
                        break;
                    }
                }
            }
            const auto est = lcd_d2(z, params);
            const double got = est.value;
            if (est.censored ? oracle != params.cap
                             : std::fabs(got - oracle) > 3.0 * params.grid_step + 2e-3) {
                ++mismatches;
            }
        }
        expect(mismatches == 0, "D2 matches brute-force polar oracle at m <= 4 (50 vectors)");
    }
}

void criterion_levy_shape() {
    const int n = 400;
    const double p = 0.2;
    std::vector<cplx> v(n, cplx(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
    bool ok = true;
    std::string detail;
    for (double eps : {0.1, 0.2, 0.3, 0.4}) {
        const auto row = small_ball_experiment(v, n, p, {LawKind::Rademacher, 0.5}, 10000,
                                               eps, 1.0, 4242);
        if (row.estimate > row.berry_esseen_bound) ok = false;
        detail += format_double(row.estimate) + " ";
    }
    expect(ok, "Levy estimate <= 5(eps + 1/sqrt(pn)) across the eps grid", detail);
}

void criterion_stieltjes_trend() {
    ExperimentConfig c;
    c.experiment = "stieltjes-compare";
    c.ensemble.kind = EnsembleKind::SparseProduct;
    c.ensemble.n = 512;
    c.ensemble.entry_law = {LawKind::Rademacher, 0.5};
    c.ensemble.seed = 11;
    c.w = cplx(0.5, 0.0);
    c.epsilons = {0.05, 0.1, 0.2, 0.4};
    c.trials = 20;
    c.threads = g_threads;
    const auto report = run_experiment(c);
    std::string detail;
    for (const auto& row : report.rows) detail += format_double(row[1]) + " ";
    expect(report.all_pass(), "|E m_n(i) - E m_G(i)| strictly decreasing in p", detail);
}

void criterion_determinism() {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "lab_acceptance_det";
    fs::remove_all(base);
    auto make = [&](const std::string& sub, int threads) {
        ExperimentConfig c;
        c.experiment = "circular-law";
        c.ensemble.kind = EnsembleKind::SparseProduct;
        c.ensemble.n = 128;
        c.ensemble.p = 0.3;
        c.ensemble.entry_law = {LawKind::Rademacher, 0.5};
        c.ensemble.seed = 2718;
        c.trials = 6;
        c.threads = threads;
        c.out_dir = (base / sub).string();
        c.formats = {"csv", "json", "svg"};
        c.tolerance_overrides["radial_ks"] = 0.5;
        c.tolerance_overrides["outside_fraction"] = 0.5;
        c.tolerance_overrides["ginibre_compare_ks"] = 0.5;
        return c;
    };
    run_and_emit(make("t1", 1));
    run_and_emit(make("t8", 8));
    run_and_emit(make("t1b", 1));
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    bool ok = true;
    for (const char* f : {"eigenvalues.csv", "rows.csv"}) {
        const std::string a = slurp(base / "t1" / f);
        if (a.empty() || a != slurp(base / "t8" / f) || a != slurp(base / "t1b" / f)) {
            ok = false;
        }
    }
    fs::remove_all(base);
    expect(ok, "CSV outputs byte-identical at 1 and 8 worker threads");
}

struct Criterion {
    std::string name;
    std::function<void()> fn;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_threads = std::max(1, std::atoi(argv[1]));
    const std::vector<Criterion> criteria = {
        {"1. exact identities", criterion_exact_identities},
        {"2. girko sanity (delta_0 + Ginibre density)", criterion_girko_sanity},
        {"3. circular law at desk scale", criterion_circular_law},
        {"4. support edge lambda_plus", criterion_support_edge},
        {"5. smallest singular value scaling", criterion_smin_scaling},
        {"6. intermediate singular values", criterion_intermediate},
        {"7. distance concentration", criterion_distance},
        {"8. zero-column barrier", criterion_zero_column},
        {"9. LCD lemma suite", criterion_lcd_suite},
        {"10. Levy / Berry-Esseen shape", criterion_levy_shape},
        {"11. Stieltjes comparison trend", criterion_stieltjes_trend},
        {"12. determinism across threads", criterion_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        g_checks.clear();
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            c.fn();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool pass = error.empty();
        for (const auto& chk : g_checks) pass = pass && chk.pass;
        if (!pass) ++failures;
        std::printf("[%s] %s (%.1fs)\n", pass ? "PASS" : "FAIL", c.name.c_str(), secs);
        if (!error.empty()) std::printf("       error: %s\n", error.c_str());
        for (const auto& chk : g_checks) {
            if (!chk.pass || !chk.detail.empty()) {
                std::printf("       %s %s %s\n", chk.pass ? "ok  " : "FAIL",
                            chk.label.c_str(), chk.detail.c_str());
            }
        }
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
