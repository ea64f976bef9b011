#include "pvelab/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace pvelab {

namespace {

void check_pair(const TabularMdp& env, const TabularMdp& model) {
    if (env.n_states != model.n_states || env.n_actions != model.n_actions) {
        throw std::invalid_argument("bound check: env/model shape mismatch");
    }
    if (env.discount != model.discount) {
        throw std::invalid_argument("bound check: env/model discount mismatch");
    }
}

bool within_slack(double lhs, double rhs) {
    return lhs <= rhs + BoundReport::kSlack;
}

/// Empirical smoothness constant g = ||v_pi - v||_inf / ||v_pi - v||_{d_pi};
/// when v = v_pi both norms vanish, so g defaults to 1 with a note.
double empirical_g(const Vec& value_gap, const StateDistribution& d,
                   std::string& note) {
    const double sup = sup_norm(value_gap);
    const double weighted = weighted_norm(value_gap, d);
    if (sup == 0.0) {
        note = "v = v_pi: g undefined, using g = 1";
        return 1.0;
    }
    return sup / std::max(weighted, 1e-12);
}

}  // namespace

BoundReport verify_pve_bound(const TabularMdp& env, const TabularMdp& model,
                             const Policy& policy, const StateFunction& v,
                             int k, int n) {
    check_pair(env, model);
    if (k < 1 || n < 1) {
        throw std::invalid_argument("verify_pve_bound: k, n must be >= 1");
    }
    const double gamma = env.discount;
    const Vec v_pi = policy_evaluation(env, policy);

    const double eps_v = sup_norm(v_pi - v);
    const double eps_ve =
        sup_norm(k_step_bellman(env, policy, v, n) -
                 k_step_bellman(model, policy, v, k));

    BoundReport report;
    report.lhs = sup_norm(v_pi - k_step_bellman(model, policy, v_pi, k));
    report.rhs = (std::pow(gamma, k) + std::pow(gamma, n)) * eps_v + eps_ve;
    report.components["eps_v"] = eps_v;
    report.components["eps_ve"] = eps_ve;
    report.satisfied = within_slack(report.lhs, report.rhs);
    return report;
}

BoundReport verify_weighted_bound(const TabularMdp& env,
                                  const TabularMdp& model,
                                  const Policy& policy, const StateFunction& v,
                                  int k, int n, double teleport_eps) {
    check_pair(env, model);
    if (k < 1 || n < 1) {
        throw std::invalid_argument("verify_weighted_bound: k, n must be >= 1");
    }
    const double gamma = env.discount;
    const Vec v_pi = policy_evaluation(env, policy);
    const StateDistribution d = stationary_distribution(env, policy, teleport_eps);

    const Vec value_gap = v_pi - v;
    BoundReport report;
    const double g = empirical_g(value_gap, d, report.note);
    const double eps_v = weighted_norm(value_gap, d);
    const double eps_ve =
        weighted_norm(k_step_bellman(env, policy, v, n) -
                          k_step_bellman(model, policy, v, k),
                      d);

    report.lhs = weighted_norm(v_pi - k_step_bellman(model, policy, v_pi, k), d);
    report.rhs = (g * std::pow(gamma, k) + std::pow(gamma, n)) * eps_v + eps_ve;
    report.components["eps_v"] = eps_v;
    report.components["eps_ve"] = eps_ve;
    report.components["g"] = g;
    report.components["g_conservative"] = 1.0 / std::sqrt(d.minCoeff());
    report.components["teleport_eps"] = teleport_eps;
    report.satisfied = within_slack(report.lhs, report.rhs);
    return report;
}

BoundReport muzero_bound_check(const TabularMdp& env, const TabularMdp& model,
                               const Policy& policy, const StateFunction& v,
                               int n, int K, double teleport_eps) {
    check_pair(env, model);
    if (n < 1 || K < 1) {
        throw std::invalid_argument("muzero_bound_check: n, K must be >= 1");
    }
    const double gamma = env.discount;
    const Vec v_pi = policy_evaluation(env, policy);
    const StateDistribution d = stationary_distribution(env, policy, teleport_eps);

    BoundReport report;
    const double g = empirical_g(v_pi - v, d, report.note);
    const Vec tn_v = k_step_bellman(env, policy, v, n);
    const Vec r_pi = policy_reward(env, policy);
    const Vec r_model = policy_reward(model, policy);

    const double value_term = std::pow(weighted_norm(tn_v - v, d), 2);
    const double trans_term =
        std::pow(weighted_norm(transition_operator_k(env, policy, tn_v, K) -
                                   transition_operator_k(model, policy, v, K),
                               d),
                 2);
    double reward_terms = 0.0;
    for (int j = 0; j <= K; ++j) {
        reward_terms +=
            std::pow(weighted_norm(transition_operator_k(env, policy, r_pi, j) -
                                       transition_operator_k(model, policy,
                                                             r_model, j),
                                   d),
                     2);
    }
    const double lower_bound = value_term + trans_term + reward_terms;
    const double a =
        std::pow(gamma, K) * (g + std::pow(gamma, n)) / (1.0 - std::pow(gamma, n));
    const double b = a + K + 2;

    // Orientation is reversed here: a*b*L must dominate the squared PVE gap.
    report.lhs = std::pow(
        weighted_norm(v_pi - k_step_bellman(model, policy, v_pi, K), d), 2);
    report.rhs = a * b * lower_bound;
    report.components["loss_lower_bound"] = lower_bound;
    report.components["value_term"] = value_term;
    report.components["trans_term"] = trans_term;
    report.components["reward_terms"] = reward_terms;
    report.components["g"] = g;
    report.components["a"] = a;
    report.components["b"] = b;
    report.components["teleport_eps"] = teleport_eps;
    report.satisfied = within_slack(report.lhs, report.rhs);
    return report;
}

BoundReport muzero_reward_decomposition_check(const TabularMdp& env,
                                              const TabularMdp& model,
                                              const Policy& policy,
                                              const StateFunction& v, int n,
                                              int K, double teleport_eps) {
    check_pair(env, model);
    if (n < 1 || K < 1) {
        throw std::invalid_argument(
            "muzero_reward_decomposition_check: n, K must be >= 1");
    }
    const StateDistribution d = stationary_distribution(env, policy, teleport_eps);
    const Vec tn_v = k_step_bellman(env, policy, v, n);
    const Vec r_pi = policy_reward(env, policy);
    const Vec r_model = policy_reward(model, policy);

    BoundReport report;
    report.lhs = weighted_norm(k_step_bellman(env, policy, v, K + n) -
                                   k_step_bellman(model, policy, v, K),
                               d);
    double rhs = weighted_norm(transition_operator_k(env, policy, tn_v, K) -
                                   transition_operator_k(model, policy, v, K),
                               d);
    for (int j = 0; j <= K; ++j) {
        rhs += weighted_norm(transition_operator_k(env, policy, r_pi, j) -
                                 transition_operator_k(model, policy, r_model, j),
                             d);
    }
    report.rhs = rhs;
    report.components["teleport_eps"] = teleport_eps;
    report.satisfied = within_slack(report.lhs, report.rhs);
    return report;
}

}  // namespace pvelab
