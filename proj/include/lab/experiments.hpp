#pragma once

#include <functional>

#include "lab/report.hpp"

namespace lab {

class UnknownExperimentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ExperimentReport exp_circular_law(const ExperimentConfig& config);
ExperimentReport exp_smin_scaling(const ExperimentConfig& config);
ExperimentReport exp_intermediate_sv(const ExperimentConfig& config);
ExperimentReport exp_girko_density(const ExperimentConfig& config);
ExperimentReport exp_weak_convergence(const ExperimentConfig& config);
ExperimentReport exp_stieltjes_compare(const ExperimentConfig& config);
ExperimentReport exp_kernel_probe(const ExperimentConfig& config);
ExperimentReport exp_small_ball(const ExperimentConfig& config);
ExperimentReport exp_subspace_distance(const ExperimentConfig& config);
ExperimentReport exp_zero_column(const ExperimentConfig& config);

std::vector<std::string> experiment_names();

// Dispatch on config.experiment; throws UnknownExperimentError for an
// unregistered name and SpecError for invalid configs.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Dispatch, emit outputs, return the CLI exit code:
// 0 verdicts pass, 1 verdicts fail, 2 unknown experiment, 3 unwritable
// output dir, 4 invalid config.
int run_and_emit(const ExperimentConfig& config);

}  // namespace lab
