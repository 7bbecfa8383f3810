#pragma once

#include <map>
#include <string>
#include <vector>

#include "lab/ensembles.hpp"

namespace lab {

// Everything an experiment needs to run; serializes round-trip stable.
struct ExperimentConfig {
    std::string experiment;
    EnsembleSpec ensemble;
    cplx w{0.0, 0.0};
    int trials = 20;
    std::vector<int> n_list;          // scaling experiments
    double grid_h = 0.1;
    double grid_r_max = 1.5;
    int subspace_dim = 0;             // subspace-distance
    std::vector<double> epsilons;     // tail / small-ball grids
    double rho_hat = 0.1;
    double k_hat = 4.0;
    int m_small = 0;                  // 0 = pick n/8
    bool literal_kernel = false;      // exact Ker(B^D) instead of the s_min proxy
    std::map<std::string, double> tolerance_overrides;
    std::string out_dir;
    std::uint64_t master_seed = 1;
    std::vector<std::string> formats{"csv", "json"};
    int threads = 1;

    std::string to_json_string() const;
    static ExperimentConfig from_json_string(const std::string& text);
};

struct Verdict {
    std::string criterion;  // names the acceptance criterion it audits
    double value = 0.0;
    double threshold = 0.0;
    bool higher_is_bad = true;
    bool pass = false;
};

struct ExperimentReport {
    ExperimentConfig config;
    // column-oriented per-trial rows, one named series per statistic
    std::vector<std::string> row_columns;
    std::vector<std::vector<double>> rows;  // rows[i] aligned with row_columns
    std::map<std::string, double> summary;
    std::vector<Verdict> verdicts;
    // optional payloads for the CSV/SVG emitters
    std::vector<std::array<double, 3>> eigenvalue_points;   // trial, re, im
    std::vector<std::array<double, 3>> singular_value_rows; // trial, index, value
    std::vector<std::array<double, 3>> density_rows;        // re, im, density
    std::vector<std::string> lcd_rows;                      // preformatted lines
    double wall_clock_seconds = 0.0;
    std::string version = "0.1.0";

    bool all_pass() const;
};

// 17 significant digits, the round-trip-exact float format for all CSVs.
std::string format_double(double v);

// Write with a temp file + rename so readers never see partial output.
void atomic_write(const std::string& path, const std::string& contents);

std::string report_to_json(const ExperimentReport& report);
std::string eigenvalues_csv(const ExperimentReport& report);
std::string singular_values_csv(const ExperimentReport& report);
std::string density_csv(const ExperimentReport& report);
std::string lcd_csv(const ExperimentReport& report);
std::string rows_csv(const ExperimentReport& report);
std::string scatter_svg(const ExperimentReport& report);

// Emit everything requested by config.formats into config.out_dir.
void emit_report(const ExperimentReport& report);

}  // namespace lab
