#include "pvelab/optim.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pvelab/rng.hpp"

namespace pvelab {

OptimizerState OptimizerState::init(const ModelParams& params,
                                    AdamConfig config) {
    OptimizerState state;
    state.first_moment = Vec::Zero(params.size());
    state.second_moment = Vec::Zero(params.size());
    state.step = 0;
    state.config = config;
    return state;
}

void adam_step(OptimizerState& state, ModelParams& params,
               const ModelParams& grad) {
    const AdamConfig& c = state.config;
    const Vec g = grad.flatten();
    if (g.size() != state.first_moment.size()) {
        throw std::invalid_argument("adam_step: gradient size mismatch");
    }
    ++state.step;
    state.first_moment = c.beta1 * state.first_moment + (1.0 - c.beta1) * g;
    state.second_moment =
        c.beta2 * state.second_moment + (1.0 - c.beta2) * g.array().square().matrix();
    const double bias1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
    const double bias2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
    const Vec m_hat = state.first_moment / bias1;
    const Vec v_hat = state.second_moment / bias2;
    Vec theta = params.flatten();
    theta.array() -= c.lr * m_hat.array() / (v_hat.array().sqrt() + c.eps);
    params.unflatten(theta);
}

TrainResult train(const TabularMdp& env, const TrainConfig& config,
                  const PolicyValueDataset& dataset) {
    if (config.iters < 0) {
        throw std::invalid_argument("train: iters must be >= 0");
    }
    if (config.batch_size < 1 ||
        config.batch_size > static_cast<int>(dataset.size())) {
        throw std::invalid_argument("train: batch_size outside [1, dataset size]");
    }
    const auto pairs = prepare_pairs(env, dataset, config.loss_kind, config.k);
    std::vector<int> all(pairs.size());
    std::iota(all.begin(), all.end(), 0);

    ModelParams params =
        init_params(env.n_states, env.n_actions, config.rank, env.discount,
                    derive_seed(config.seed, "init", 0));
    AdamConfig adam = config.adam;
    adam.lr = config.lr;
    OptimizerState opt = OptimizerState::init(params, adam);
    Rng batch_rng(derive_seed(config.seed, "batch", 0));

    TrainResult result;
    auto take_snapshot = [&](long iter) {
        result.snapshots.push_back(params);
        result.snapshot_iters.push_back(iter);
        result.snapshot_losses.push_back(
            batch_loss(realize_model(params), pairs, all, config.k));
    };
    take_snapshot(0);

    std::vector<int> batch(config.batch_size);
    ModelParams grad;
    for (long iter = 1; iter <= config.iters; ++iter) {
        for (int& idx : batch) {
            idx = batch_rng.next_int(static_cast<int>(pairs.size()));
        }
        const double loss = loss_and_gradient(params, pairs, batch, config.k,
                                              grad, config.n_threads);
        if (!std::isfinite(loss)) {
            throw std::runtime_error("train: non-finite loss at iteration " +
                                     std::to_string(iter));
        }
        adam_step(opt, params, grad);
        if (iter % config.snapshot_every == 0 || iter == config.iters) {
            take_snapshot(iter);
        }
    }
    result.final_loss = result.snapshot_losses.back();
    return result;
}

}  // namespace pvelab
