#pragma once

#include <vector>

#include "pvelab/mdp.hpp"
#include "pvelab/rng.hpp"

namespace pvelab {

/// Unconstrained parameters realizing a learnable model. Transition rows are
/// softmax of logit rows; in low-rank mode each P_a is a product of two
/// row-stochastic factors softmax(d_logits) * softmax(k_logits).
struct ModelParams {
    static constexpr int kFullRank = -1;

    int n_states = 0;
    int n_actions = 0;
    int rank = kFullRank;            // kFullRank or 1..n_states
    double discount = 0.0;           // copied into the realized model

    Mat reward;                      // n_states x n_actions
    std::vector<Mat> trans_logits;   // full mode: per action n x n
    std::vector<Mat> d_logits;       // low-rank: per action n x rank
    std::vector<Mat> k_logits;       // low-rank: per action rank x n

    bool full_rank() const { return rank == kFullRank; }

    /// Total number of scalar parameters.
    long size() const;
    Vec flatten() const;
    void unflatten(const Vec& flat);

    /// Zero-valued parameters of the same shape (gradient / moment buffers).
    ModelParams zeros_like() const;
};

/// Reward entries ~ U(-1, 1), logits ~ U(-5, 5); deterministic given seed.
ModelParams init_params(int n_states, int n_actions, int rank, double discount,
                        std::uint64_t rng_seed);

/// Applies a row softmax with temperature 1 to every logit row.
Mat row_softmax(const Mat& logits);

/// Intermediate softmax outputs, kept so the gradient pass can reuse them.
struct RealizedModel {
    TabularMdp mdp;
    std::vector<Mat> d_factor;   // low-rank only
    std::vector<Mat> k_factor;   // low-rank only
};

RealizedModel realize_model_cached(const ModelParams& params);
TabularMdp realize_model(const ModelParams& params);

}  // namespace pvelab
