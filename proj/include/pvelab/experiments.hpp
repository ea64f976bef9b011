#pragma once

#include <string>

#include "pvelab/config.hpp"

namespace pvelab {

struct RunOptions {
    std::string out_dir;
    bool force = false;
    int workers = 1;
};

/// Trains model_count models per k, projects every snapshot population via
/// PCA, and emits points / diameter / per-model summary CSVs.
int run_model_space(const ExperimentConfig& config, const RunOptions& opts);

/// Trains a PVE model per (rank, policy family, seed) and reports the
/// environment value of its optimal policy next to the environment optimum.
int run_capacity_sweep(const ExperimentConfig& config, const RunOptions& opts);

/// Runs the fixture and bound suites; writes a CSV report; returns nonzero
/// iff any check fails.
int run_verify(const std::string& suite, std::uint64_t seed, int count,
               const RunOptions& opts);

/// Emits seeded rollouts (from a model file or the environment) as a tidy
/// trajectory CSV, plus a count of grid-adjacency violations.
int run_trajectories(const ExperimentConfig& config, const RunOptions& opts);

}  // namespace pvelab
