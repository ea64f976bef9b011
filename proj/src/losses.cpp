#include "pvelab/losses.hpp"

#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pvelab/dp.hpp"

namespace pvelab {

namespace {

void check_batch(const TabularMdp& env, const PolicyValueDataset& batch,
                 LossKind kind, int k) {
    if (k < 1) {
        throw std::invalid_argument("loss: k must be >= 1");
    }
    if (batch.size() == 0) {
        throw std::invalid_argument("loss: empty batch");
    }
    if (batch.policies.size() != batch.functions.size()) {
        throw std::invalid_argument("loss: policies/functions size mismatch");
    }
    for (const Policy& pi : batch.policies) {
        if (pi.n_states() != env.n_states || pi.n_actions() != env.n_actions) {
            throw std::invalid_argument("loss: policy shape does not match env");
        }
    }
    if (kind == LossKind::Pve &&
        batch.semantics != PolicyValueDataset::Semantics::ExactValues) {
        throw std::invalid_argument(
            "pve_loss: batch must carry exact values, not arbitrary functions");
    }
}

/// Squared error of the k-step model prediction against the pair's target,
/// averaged over states.
double pair_loss(const TabularMdp& model, const PreparedPair& pair, int k) {
    const Vec prediction = k_step_bellman(model, *pair.policy, *pair.input, k);
    return (prediction - pair.target).squaredNorm() / model.n_states;
}

/// Per-pair gradient of the state-mean squared error with respect to the
/// policy-averaged model reward r~_pi and transition P~_pi. Reverse pass
/// through the k operator applications u_j = r~_pi + gamma P~_pi u_{j-1}.
struct PairBackward {
    double loss = 0.0;
    Vec g_reward_pi;   // n
    Mat g_trans_pi;    // n x n
};

PairBackward pair_backward(const TabularMdp& model, const PreparedPair& pair,
                           int k) {
    const int n = model.n_states;
    const Policy& pi = *pair.policy;
    const Vec r_pi = policy_reward(model, pi);
    const Mat p_pi = policy_transition(model, pi);

    std::vector<Vec> u(k + 1);
    u[0] = *pair.input;
    for (int j = 1; j <= k; ++j) {
        u[j] = r_pi + model.discount * (p_pi * u[j - 1]);
    }

    PairBackward out;
    const Vec residual = u[k] - pair.target;
    out.loss = residual.squaredNorm() / n;
    out.g_reward_pi = Vec::Zero(n);
    out.g_trans_pi = Mat::Zero(n, n);

    Vec lambda = (2.0 / n) * residual;
    for (int j = k; j >= 1; --j) {
        out.g_reward_pi += lambda;
        out.g_trans_pi.noalias() += model.discount * lambda * u[j - 1].transpose();
        if (j > 1) lambda = model.discount * (p_pi.transpose() * lambda);
    }
    return out;
}

/// Gradient through one row of a softmax: gl_i = p_i (g_i - p . g).
void softmax_rows_backward(const Mat& probs, const Mat& g_probs, Mat& g_logits) {
    g_logits.resize(probs.rows(), probs.cols());
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        const double dot = probs.row(i).dot(g_probs.row(i));
        g_logits.row(i) =
            probs.row(i).array() * (g_probs.row(i).array() - dot);
    }
}

}  // namespace

std::vector<PreparedPair> prepare_pairs(const TabularMdp& env,
                                        const PolicyValueDataset& dataset,
                                        LossKind kind, int k) {
    check_batch(env, dataset, kind, k);
    std::vector<PreparedPair> pairs(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        pairs[i].policy = &dataset.policies[i];
        pairs[i].input = &dataset.functions[i];
        if (kind == LossKind::OrderKVe) {
            pairs[i].target =
                k_step_bellman(env, dataset.policies[i], dataset.functions[i], k);
        } else {
            pairs[i].target = dataset.functions[i];   // v_pi is its own target
        }
    }
    return pairs;
}

double batch_loss(const TabularMdp& model,
                  const std::vector<PreparedPair>& pairs,
                  const std::vector<int>& indices, int k) {
    if (indices.empty()) {
        throw std::invalid_argument("batch_loss: empty index set");
    }
    double total = 0.0;
    for (int i : indices) {
        total += pair_loss(model, pairs.at(i), k);
    }
    return total / indices.size();
}

double order_k_ve_loss(const TabularMdp& model, const TabularMdp& env,
                       const PolicyValueDataset& batch, int k) {
    const auto pairs = prepare_pairs(env, batch, LossKind::OrderKVe, k);
    std::vector<int> all(pairs.size());
    std::iota(all.begin(), all.end(), 0);
    return batch_loss(model, pairs, all, k);
}

double order_k_ve_loss(const ModelParams& params, const TabularMdp& env,
                       const PolicyValueDataset& batch, int k) {
    return order_k_ve_loss(realize_model(params), env, batch, k);
}

double pve_loss(const TabularMdp& model, const TabularMdp& env,
                const PolicyValueDataset& batch, int k) {
    const auto pairs = prepare_pairs(env, batch, LossKind::Pve, k);
    std::vector<int> all(pairs.size());
    std::iota(all.begin(), all.end(), 0);
    return batch_loss(model, pairs, all, k);
}

double pve_loss(const ModelParams& params, const TabularMdp& env,
                const PolicyValueDataset& batch, int k) {
    return pve_loss(realize_model(params), env, batch, k);
}

double loss_and_gradient(const ModelParams& params,
                         const std::vector<PreparedPair>& pairs,
                         const std::vector<int>& indices, int k,
                         ModelParams& grad, int n_threads) {
    if (indices.empty()) {
        throw std::invalid_argument("loss_and_gradient: empty index set");
    }
    if (k < 1) {
        throw std::invalid_argument("loss_and_gradient: k must be >= 1");
    }
    const RealizedModel realized = realize_model_cached(params);
    const TabularMdp& model = realized.mdp;
    const int n = params.n_states;
    const int n_actions = params.n_actions;
    const int batch = static_cast<int>(indices.size());

    // Per-pair backward passes run in parallel; the reduction below walks the
    // batch in index order so the result never depends on the thread count.
    std::vector<PairBackward> per_pair(batch);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(n_threads)
#endif
    for (int b = 0; b < batch; ++b) {
        per_pair[b] = pair_backward(model, pairs.at(indices[b]), k);
    }
    (void)n_threads;

    double total_loss = 0.0;
    Mat g_reward = Mat::Zero(n, n_actions);
    std::vector<Mat> g_trans(n_actions, Mat::Zero(n, n));
    for (int b = 0; b < batch; ++b) {
        const PairBackward& pb = per_pair[b];
        const Policy& pi = *pairs[indices[b]].policy;
        total_loss += pb.loss;
        for (int a = 0; a < n_actions; ++a) {
            g_reward.col(a).array() +=
                pi.probs.col(a).array() * pb.g_reward_pi.array();
            g_trans[a].noalias() +=
                pi.probs.col(a).asDiagonal() * pb.g_trans_pi;
        }
    }
    const double scale = 1.0 / batch;
    g_reward *= scale;
    for (Mat& m : g_trans) m *= scale;

    // Realization backward, once per batch: rewards are direct parameters;
    // transition rows go through the softmax (or the low-rank product first).
    grad = params.zeros_like();
    grad.reward = g_reward;
    if (params.full_rank()) {
        for (int a = 0; a < n_actions; ++a) {
            softmax_rows_backward(model.transition[a], g_trans[a],
                                  grad.trans_logits[a]);
        }
    } else {
        for (int a = 0; a < n_actions; ++a) {
            const Mat g_d = g_trans[a] * realized.k_factor[a].transpose();
            const Mat g_k = realized.d_factor[a].transpose() * g_trans[a];
            softmax_rows_backward(realized.d_factor[a], g_d, grad.d_logits[a]);
            softmax_rows_backward(realized.k_factor[a], g_k, grad.k_logits[a]);
        }
    }
    return total_loss * scale;
}

ModelParams loss_gradient(const ModelParams& params, const LossSpec& spec) {
    if (spec.env == nullptr || spec.batch == nullptr) {
        throw std::invalid_argument("loss_gradient: env and batch required");
    }
    const auto pairs = prepare_pairs(*spec.env, *spec.batch, spec.kind, spec.k);
    std::vector<int> all(pairs.size());
    std::iota(all.begin(), all.end(), 0);
    ModelParams grad;
    loss_and_gradient(params, pairs, all, spec.k, grad);
    return grad;
}

}  // namespace pvelab
