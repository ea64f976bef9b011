#include "pvelab/model.hpp"

#include <cmath>

namespace pvelab {

long ModelParams::size() const {
    long total = static_cast<long>(reward.size());
    if (full_rank()) {
        total += static_cast<long>(n_actions) * n_states * n_states;
    } else {
        total += static_cast<long>(n_actions) * n_states * rank;
        total += static_cast<long>(n_actions) * rank * n_states;
    }
    return total;
}

Vec ModelParams::flatten() const {
    Vec flat(size());
    long offset = 0;
    auto push = [&](const Mat& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) flat(offset++) = m(i, j);
    };
    push(reward);
    if (full_rank()) {
        for (const Mat& m : trans_logits) push(m);
    } else {
        for (const Mat& m : d_logits) push(m);
        for (const Mat& m : k_logits) push(m);
    }
    return flat;
}

void ModelParams::unflatten(const Vec& flat) {
    long offset = 0;
    auto pull = [&](Mat& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = flat(offset++);
    };
    pull(reward);
    if (full_rank()) {
        for (Mat& m : trans_logits) pull(m);
    } else {
        for (Mat& m : d_logits) pull(m);
        for (Mat& m : k_logits) pull(m);
    }
    if (offset != flat.size()) {
        throw std::invalid_argument("ModelParams::unflatten: size mismatch");
    }
}

ModelParams ModelParams::zeros_like() const {
    ModelParams z = *this;
    z.reward.setZero();
    for (Mat& m : z.trans_logits) m.setZero();
    for (Mat& m : z.d_logits) m.setZero();
    for (Mat& m : z.k_logits) m.setZero();
    return z;
}

ModelParams init_params(int n_states, int n_actions, int rank, double discount,
                        std::uint64_t rng_seed) {
    if (rank != ModelParams::kFullRank && (rank < 1 || rank > n_states)) {
        throw std::invalid_argument("init_params: rank must be `full` or in [1, n_states]");
    }
    ModelParams params;
    params.n_states = n_states;
    params.n_actions = n_actions;
    params.rank = rank;
    params.discount = discount;

    Rng rng(rng_seed);
    auto fill = [&rng](Mat& m, double lo, double hi) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(lo, hi);
    };
    params.reward.resize(n_states, n_actions);
    fill(params.reward, -1.0, 1.0);
    if (params.full_rank()) {
        params.trans_logits.assign(n_actions, Mat(n_states, n_states));
        for (Mat& m : params.trans_logits) fill(m, -5.0, 5.0);
    } else {
        params.d_logits.assign(n_actions, Mat(n_states, rank));
        params.k_logits.assign(n_actions, Mat(rank, n_states));
        for (Mat& m : params.d_logits) fill(m, -5.0, 5.0);
        for (Mat& m : params.k_logits) fill(m, -5.0, 5.0);
    }
    return params;
}

Mat row_softmax(const Mat& logits) {
    Mat out(logits.rows(), logits.cols());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        const double m = logits.row(i).maxCoeff();
        out.row(i) = (logits.row(i).array() - m).exp();
        out.row(i) /= out.row(i).sum();
    }
    return out;
}

RealizedModel realize_model_cached(const ModelParams& params) {
    RealizedModel out;
    out.mdp.n_states = params.n_states;
    out.mdp.n_actions = params.n_actions;
    out.mdp.discount = params.discount;
    out.mdp.reward = params.reward;
    out.mdp.transition.resize(params.n_actions);
    if (params.full_rank()) {
        for (int a = 0; a < params.n_actions; ++a) {
            out.mdp.transition[a] = row_softmax(params.trans_logits[a]);
        }
    } else {
        out.d_factor.resize(params.n_actions);
        out.k_factor.resize(params.n_actions);
        for (int a = 0; a < params.n_actions; ++a) {
            out.d_factor[a] = row_softmax(params.d_logits[a]);
            out.k_factor[a] = row_softmax(params.k_logits[a]);
            out.mdp.transition[a].noalias() = out.d_factor[a] * out.k_factor[a];
        }
    }
    return out;
}

TabularMdp realize_model(const ModelParams& params) {
    return realize_model_cached(params).mdp;
}

}  // namespace pvelab
