#pragma once

#include "pvelab/mdp.hpp"

namespace pvelab {

/// Expected one-step reward under pi: r_pi(s) = sum_a pi(a|s) r(s,a).
Vec policy_reward(const TabularMdp& mdp, const Policy& policy);

/// State-to-state transition matrix under pi:
/// P_pi(s,s') = sum_a pi(a|s) p(s'|s,a).
Mat policy_transition(const TabularMdp& mdp, const Policy& policy);

/// One application of the policy's Bellman operator:
/// T_pi[v](s) = sum_a pi(a|s) [r(s,a) + gamma * sum_s' p(s'|s,a) v(s')].
StateFunction bellman_operator(const TabularMdp& mdp, const Policy& policy,
                               const StateFunction& v);

/// bellman_operator composed k times (k >= 1; k = 0 is rejected).
StateFunction k_step_bellman(const TabularMdp& mdp, const Policy& policy,
                             const StateFunction& v, int k);

/// E[x(S_{t+k}) | s, pi]; k = 0 is the identity.
StateFunction transition_operator_k(const TabularMdp& mdp, const Policy& policy,
                                    const StateFunction& x, int k);

enum class EvalMethod { Exact, Iterative };

/// Value function of pi. Exact mode solves (I - gamma P_pi) v = r_pi;
/// iterative mode applies T_pi until the sup-norm change drops below tol.
/// Either way the result satisfies ||T_pi v - v||_inf <= 10 * tol.
StateFunction policy_evaluation(const TabularMdp& mdp, const Policy& policy,
                                EvalMethod method = EvalMethod::Exact,
                                double tol = 1e-10);

/// Stationary distribution of (1-eps) P_pi + eps * Uniform, by power
/// iteration to 1e-12. eps > 0 makes the chain ergodic; eps = 0 on a
/// periodic or reducible chain raises after max iterations.
StateDistribution stationary_distribution(const TabularMdp& mdp,
                                          const Policy& policy,
                                          double teleport_eps = 1e-3);

/// sqrt(sum_s d(s) x(s)^2).
double weighted_norm(const StateFunction& x, const StateDistribution& d);

double sup_norm(const StateFunction& x);

/// Deterministic policy choosing argmax_a r(s,a) + gamma sum_s' p(s'|s,a) v(s').
/// Ties break toward the lowest action index.
Policy greedy_policy(const TabularMdp& mdp, const StateFunction& v);

struct ValueIterationResult {
    StateFunction values;
    Policy policy;
    int iterations = 0;
};

/// Iterates the Bellman optimality operator until the sup-norm residual
/// drops below tol, then extracts the greedy policy.
ValueIterationResult value_iteration(const TabularMdp& mdp, double tol = 1e-10);

namespace serial {

/// Naive loop reference implementations, kept for cross-checking the
/// vectorized kernels and for the benchmark baseline.
StateFunction bellman_operator(const TabularMdp& mdp, const Policy& policy,
                               const StateFunction& v);
StateFunction k_step_bellman(const TabularMdp& mdp, const Policy& policy,
                             const StateFunction& v, int k);
StateFunction transition_operator_k(const TabularMdp& mdp, const Policy& policy,
                                    const StateFunction& x, int k);

}  // namespace serial

}  // namespace pvelab
