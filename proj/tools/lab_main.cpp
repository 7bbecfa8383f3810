#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lab/experiments.hpp"

namespace {

// Exit codes: 0 verdicts pass, 1 verdicts fail, 2 unknown experiment,
// 3 unwritable output dir, 4 invalid flags/config.
constexpr int kExitUnknownExperiment = 2;
constexpr int kExitUnwritableOutput = 3;
constexpr int kExitInvalidConfig = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random-matrix laboratory"};
    app.require_subcommand(0);

    std::string experiment;
    app.add_option("experiment", experiment, "experiment name")->required();

    lab::ExperimentConfig config;
    int n = 0;
    double p = -1.0;
    std::string dist;
    std::string kind;
    double w_re = 0.0, w_im = 0.0;
    std::uint64_t seed = 1;
    std::string formats;
    std::string config_file;
    std::vector<int> n_list;
    std::vector<double> eps_list;

    app.add_option("--n", n, "matrix dimension");
    app.add_option("--p", p, "sparsity / edge probability");
    app.add_option("--dist", dist,
                   "entry law: rademacher|gaussian|uniform_sym|bernoulli_centered(q)");
    app.add_option("--kind", kind,
                   "ensemble: sparse_product|er_adjacency|ginibre_real|ginibre_complex");
    app.add_option("--w-re", w_re, "shift, real part");
    app.add_option("--w-im", w_im, "shift, imaginary part");
    app.add_option("--trials", config.trials, "trials per configuration");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--grid-h", config.grid_h, "density grid spacing");
    app.add_option("--grid-rmax", config.grid_r_max, "density grid radius");
    app.add_option("--n-list", n_list, "dimensions for scaling experiments");
    app.add_option("--eps", eps_list, "epsilon grid (tails, small-ball, p grid)");
    app.add_option("--d", config.subspace_dim, "subspace dimension");
    app.add_option("--rho-hat", config.rho_hat, "structure flag level");
    app.add_option("--m-small", config.m_small, "large-coordinate count M");
    app.add_flag("--literal-kernel", config.literal_kernel,
                 "use the exact (n-1) x n kernel instead of the s_min proxy");
    app.add_option("--out", config.out_dir, "output directory");
    app.add_option("--format", formats, "comma list: csv,json,svg");
    app.add_option("--threads", config.threads, "worker threads");
    app.add_option("--config", config_file, "JSON config file (overrides flags)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitInvalidConfig;
    }

    try {
        config.experiment = experiment;
        if (n > 0) config.ensemble.n = n;
        if (p >= 0.0) config.ensemble.p = p;
        if (!dist.empty()) config.ensemble.entry_law = lab::EntryLaw::parse(dist);
        if (!kind.empty()) config.ensemble.kind = lab::parse_ensemble_kind(kind);
        config.ensemble.seed = seed;
        config.master_seed = seed;
        config.w = lab::cplx(w_re, w_im);
        if (!n_list.empty()) config.n_list = n_list;
        if (!eps_list.empty()) config.epsilons = eps_list;
        if (!formats.empty()) {
            config.formats.clear();
            std::stringstream ss(formats);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) config.formats.push_back(item);
            }
        }
        if (!config_file.empty()) {
            config = lab::ExperimentConfig::from_json_string(read_file(config_file));
            if (config.experiment.empty()) config.experiment = experiment;
        }
        if (const char* env_seed = std::getenv("LAB_SEED")) {
            const std::uint64_t s = std::strtoull(env_seed, nullptr, 10);
            config.ensemble.seed = s;
            config.master_seed = s;
        }

        const int code = lab::run_and_emit(config);
        if (code == 3) {
            std::cerr << "output directory is not writable: " << config.out_dir << "\n";
            return kExitUnwritableOutput;
        }
        return code;
    } catch (const lab::UnknownExperimentError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << "known experiments:";
        for (const auto& name : lab::experiment_names()) std::cerr << " " << name;
        std::cerr << "\n";
        return kExitUnknownExperiment;
    } catch (const lab::SpecError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    }
}
