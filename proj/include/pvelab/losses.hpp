#pragma once

#include <vector>

#include "pvelab/dataset.hpp"
#include "pvelab/model.hpp"

namespace pvelab {

enum class LossKind { OrderKVe, Pve };

struct LossSpec {
    LossKind kind = LossKind::Pve;
    int k = 1;
    const TabularMdp* env = nullptr;
    const PolicyValueDataset* batch = nullptr;
};

/// One (policy, input-function, environment-target) triple with the
/// environment side precomputed. For order-k VE the target is T_pi^k v;
/// for PVE the input and target are both v_pi.
struct PreparedPair {
    const Policy* policy = nullptr;
    const StateFunction* input = nullptr;
    StateFunction target;
};

/// Precomputes environment-side targets once per dataset.
std::vector<PreparedPair> prepare_pairs(const TabularMdp& env,
                                        const PolicyValueDataset& dataset,
                                        LossKind kind, int k);

/// Mean over pairs of mean_s (model-side(s) - target(s))^2 for an explicit
/// model. The model side is T~_pi^k applied to the pair's input function.
double batch_loss(const TabularMdp& model,
                  const std::vector<PreparedPair>& pairs,
                  const std::vector<int>& indices, int k);

/// (1/|B|) sum_pairs mean_s (T~_pi^k v - T_pi^k v)^2.
double order_k_ve_loss(const TabularMdp& model, const TabularMdp& env,
                       const PolicyValueDataset& batch, int k);
double order_k_ve_loss(const ModelParams& params, const TabularMdp& env,
                       const PolicyValueDataset& batch, int k);

/// (1/|B|) sum_pairs mean_s (T~_pi^k v_pi - v_pi)^2; requires an
/// exact-values batch.
double pve_loss(const TabularMdp& model, const TabularMdp& env,
                const PolicyValueDataset& batch, int k = 1);
double pve_loss(const ModelParams& params, const TabularMdp& env,
                const PolicyValueDataset& batch, int k = 1);

/// Loss and its exact gradient with respect to every unconstrained parameter,
/// by reverse accumulation through the k operator applications and the
/// softmax (or low-rank factor) realization. Accumulation order is fixed so
/// results do not depend on the number of threads.
double loss_and_gradient(const ModelParams& params,
                         const std::vector<PreparedPair>& pairs,
                         const std::vector<int>& indices, int k,
                         ModelParams& grad, int n_threads = 1);

ModelParams loss_gradient(const ModelParams& params, const LossSpec& spec);

}  // namespace pvelab
