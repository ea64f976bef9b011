#pragma once

#include <cstdint>
#include <vector>

#include "pvelab/losses.hpp"

namespace pvelab {

/// Bias-corrected adaptive-moment update. beta1 = 0.99 on purpose.
struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.99;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct OptimizerState {
    Vec first_moment;
    Vec second_moment;
    long step = 0;
    AdamConfig config;

    static OptimizerState init(const ModelParams& params, AdamConfig config);
};

/// One Adam step over the flattened parameters.
void adam_step(OptimizerState& state, ModelParams& params,
               const ModelParams& grad);

struct TrainConfig {
    LossKind loss_kind = LossKind::Pve;
    int k = 1;
    int rank = ModelParams::kFullRank;
    long iters = 50000;
    double lr = 1e-3;
    int batch_size = 50;
    long snapshot_every = 1000;
    std::uint64_t seed = 0;
    int n_threads = 1;
    AdamConfig adam;   // lr is overwritten from `lr`
};

struct TrainResult {
    std::vector<ModelParams> snapshots;      // initialization first
    std::vector<long> snapshot_iters;
    std::vector<double> snapshot_losses;     // full-dataset loss per snapshot
    double final_loss = 0.0;
};

/// Minibatch descent on the configured loss; snapshots at the configured
/// cadence; fully deterministic given the seed. Aborts on non-finite loss.
TrainResult train(const TabularMdp& env, const TrainConfig& config,
                  const PolicyValueDataset& dataset);

}  // namespace pvelab
