#include "pvelab/dp.hpp"

#include <cmath>

namespace pvelab {

namespace {

void check_shapes(const TabularMdp& mdp, const Policy& policy) {
    if (policy.n_states() != mdp.n_states || policy.n_actions() != mdp.n_actions) {
        throw std::invalid_argument("policy shape does not match MDP");
    }
}

}  // namespace

Vec policy_reward(const TabularMdp& mdp, const Policy& policy) {
    check_shapes(mdp, policy);
    return (mdp.reward.array() * policy.probs.array()).rowwise().sum();
}

Mat policy_transition(const TabularMdp& mdp, const Policy& policy) {
    check_shapes(mdp, policy);
    Mat p = Mat::Zero(mdp.n_states, mdp.n_states);
    for (int a = 0; a < mdp.n_actions; ++a) {
        p.noalias() += policy.probs.col(a).asDiagonal() * mdp.transition[a];
    }
    return p;
}

StateFunction bellman_operator(const TabularMdp& mdp, const Policy& policy,
                               const StateFunction& v) {
    check_shapes(mdp, policy);
    check_state_function(v, mdp.n_states, "bellman_operator v");
    Vec out = policy_reward(mdp, policy);
    for (int a = 0; a < mdp.n_actions; ++a) {
        out.noalias() +=
            mdp.discount * (policy.probs.col(a).asDiagonal() * (mdp.transition[a] * v));
    }
    return out;
}

StateFunction k_step_bellman(const TabularMdp& mdp, const Policy& policy,
                             const StateFunction& v, int k) {
    if (k < 1) {
        throw std::invalid_argument("k_step_bellman: k must be >= 1");
    }
    const Vec r_pi = policy_reward(mdp, policy);
    const Mat p_pi = policy_transition(mdp, policy);
    check_state_function(v, mdp.n_states, "k_step_bellman v");
    Vec out = v;
    for (int i = 0; i < k; ++i) {
        out = r_pi + mdp.discount * (p_pi * out);
    }
    return out;
}

StateFunction transition_operator_k(const TabularMdp& mdp, const Policy& policy,
                                    const StateFunction& x, int k) {
    if (k < 0) {
        throw std::invalid_argument("transition_operator_k: k must be >= 0");
    }
    check_state_function(x, mdp.n_states, "transition_operator_k x");
    if (k == 0) return x;
    const Mat p_pi = policy_transition(mdp, policy);
    Vec out = x;
    for (int i = 0; i < k; ++i) {
        out = p_pi * out;
    }
    return out;
}

StateFunction policy_evaluation(const TabularMdp& mdp, const Policy& policy,
                                EvalMethod method, double tol) {
    if (tol <= 0.0) {
        throw std::invalid_argument("policy_evaluation: tol must be positive");
    }
    const Vec r_pi = policy_reward(mdp, policy);
    const Mat p_pi = policy_transition(mdp, policy);
    Vec v;
    if (method == EvalMethod::Exact) {
        Mat system = Mat::Identity(mdp.n_states, mdp.n_states) - mdp.discount * p_pi;
        v = system.partialPivLu().solve(r_pi);
    } else {
        v = Vec::Zero(mdp.n_states);
        // Contraction by gamma per sweep; stop when the sup-norm change < tol.
        const long max_iters = 100000000;
        for (long i = 0; i < max_iters; ++i) {
            Vec next = r_pi + mdp.discount * (p_pi * v);
            double change = (next - v).lpNorm<Eigen::Infinity>();
            v = std::move(next);
            if (change < tol) break;
        }
    }
    const double residual = (r_pi + mdp.discount * (p_pi * v) - v).lpNorm<Eigen::Infinity>();
    if (!(residual <= 10.0 * tol) || !v.allFinite()) {
        throw std::runtime_error("policy_evaluation: residual " +
                                 std::to_string(residual) + " exceeds tolerance");
    }
    return v;
}

StateDistribution stationary_distribution(const TabularMdp& mdp,
                                          const Policy& policy,
                                          double teleport_eps) {
    if (teleport_eps < 0.0 || teleport_eps >= 0.5) {
        throw std::invalid_argument("stationary_distribution: teleport_eps outside [0, 0.5)");
    }
    const int n = mdp.n_states;
    const Mat p_pi = policy_transition(mdp, policy);
    const Mat mixed = (1.0 - teleport_eps) * p_pi +
                      teleport_eps * Mat::Constant(n, n, 1.0 / n);
    Vec d = Vec::Constant(n, 1.0 / n);
    const long max_iters = 2000000;
    for (long i = 0; i < max_iters; ++i) {
        Vec next = mixed.transpose() * d;
        next /= next.sum();
        const double change = (next - d).lpNorm<Eigen::Infinity>();
        d = std::move(next);
        if (change < 1e-12) return d;
    }
    throw std::runtime_error(
        "stationary_distribution: power iteration did not converge "
        "(periodic or reducible chain with teleport_eps = 0?)");
}

double weighted_norm(const StateFunction& x, const StateDistribution& d) {
    if (x.size() != d.size()) {
        throw std::invalid_argument("weighted_norm: shape mismatch");
    }
    return std::sqrt((d.array() * x.array().square()).sum());
}

double sup_norm(const StateFunction& x) { return x.lpNorm<Eigen::Infinity>(); }

Policy greedy_policy(const TabularMdp& mdp, const StateFunction& v) {
    check_state_function(v, mdp.n_states, "greedy_policy v");
    Mat q(mdp.n_states, mdp.n_actions);
    for (int a = 0; a < mdp.n_actions; ++a) {
        q.col(a) = mdp.reward.col(a) + mdp.discount * (mdp.transition[a] * v);
    }
    std::vector<int> actions(mdp.n_states, 0);
    for (int s = 0; s < mdp.n_states; ++s) {
        int best = 0;
        for (int a = 1; a < mdp.n_actions; ++a) {
            if (q(s, a) > q(s, best)) best = a;   // strict: ties keep lowest index
        }
        actions[s] = best;
    }
    return Policy::deterministic_from_actions(actions, mdp.n_actions);
}

ValueIterationResult value_iteration(const TabularMdp& mdp, double tol) {
    if (tol <= 0.0) {
        throw std::invalid_argument("value_iteration: tol must be positive");
    }
    const int n = mdp.n_states;
    Vec v = Vec::Zero(n);
    Mat q(n, mdp.n_actions);
    int iters = 0;
    while (true) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            q.col(a) = mdp.reward.col(a) + mdp.discount * (mdp.transition[a] * v);
        }
        Vec next = q.rowwise().maxCoeff();
        const double residual = (next - v).lpNorm<Eigen::Infinity>();
        v = std::move(next);
        ++iters;
        if (residual < tol) break;
        if (iters > 100000000) {
            throw std::runtime_error("value_iteration: iteration cap reached");
        }
    }
    return {v, greedy_policy(mdp, v), iters};
}

namespace serial {

StateFunction bellman_operator(const TabularMdp& mdp, const Policy& policy,
                               const StateFunction& v) {
    const int n = mdp.n_states;
    Vec out(n);
    for (int s = 0; s < n; ++s) {
        double total = 0.0;
        for (int a = 0; a < mdp.n_actions; ++a) {
            double succ = 0.0;
            for (int s2 = 0; s2 < n; ++s2) {
                succ += mdp.transition[a](s, s2) * v(s2);
            }
            total += policy.probs(s, a) * (mdp.reward(s, a) + mdp.discount * succ);
        }
        out(s) = total;
    }
    return out;
}

StateFunction k_step_bellman(const TabularMdp& mdp, const Policy& policy,
                             const StateFunction& v, int k) {
    Vec out = v;
    for (int i = 0; i < k; ++i) {
        out = serial::bellman_operator(mdp, policy, out);
    }
    return out;
}

StateFunction transition_operator_k(const TabularMdp& mdp, const Policy& policy,
                                    const StateFunction& x, int k) {
    const int n = mdp.n_states;
    Vec out = x;
    for (int step = 0; step < k; ++step) {
        Vec next = Vec::Zero(n);
        for (int s = 0; s < n; ++s) {
            for (int a = 0; a < mdp.n_actions; ++a) {
                for (int s2 = 0; s2 < n; ++s2) {
                    next(s) += policy.probs(s, a) * mdp.transition[a](s, s2) * out(s2);
                }
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace serial

}  // namespace pvelab
