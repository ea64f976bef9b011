#pragma once

#include <map>
#include <string>

#include "pvelab/dp.hpp"
#include "pvelab/mdp.hpp"

namespace pvelab {

struct BoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    std::map<std::string, double> components;
    bool satisfied = false;
    std::string note;

    static constexpr double kSlack = 1e-9;
};

/// ||v_pi - T~_pi^k v_pi||_inf  <=  (gamma^k + gamma^n) ||v_pi - v||_inf
///                                 + ||T_pi^n v - T~_pi^k v||_inf.
BoundReport verify_pve_bound(const TabularMdp& env, const TabularMdp& model,
                             const Policy& policy, const StateFunction& v,
                             int k, int n);

/// d_pi-weighted variant with the smoothness constant g taken empirically as
/// ||v_pi - v||_inf / ||v_pi - v||_{d_pi} (g = 1 with a note when v = v_pi).
BoundReport verify_weighted_bound(const TabularMdp& env,
                                  const TabularMdp& model,
                                  const Policy& policy, const StateFunction& v,
                                  int k, int n, double teleport_eps = 1e-3);

/// Checks a * b * L >= ||v_pi - T~_pi^K v_pi||^2_{d_pi}, where L is the
/// analytic lower bound on the expected per-state model loss
///   L = ||T_pi^n v - v||^2 + ||P_pi^K T_pi^n v - P~_pi^K v||^2
///     + sum_{j=0}^{K} ||P_pi^j r_pi - P~_pi^j r~_pi||^2     (d_pi norms)
/// with a = gamma^K (g + gamma^n) / (1 - gamma^n) and b = a + K + 2.
BoundReport muzero_bound_check(const TabularMdp& env, const TabularMdp& model,
                               const Policy& policy, const StateFunction& v,
                               int n, int K, double teleport_eps = 1e-3);

/// Intermediate step of the same chain:
/// ||T_pi^{K+n} v - T~_pi^K v||_{d_pi} <= ||P_pi^K T_pi^n v - P~_pi^K v||_{d_pi}
///                                      + sum_j ||P_pi^j r_pi - P~_pi^j r~_pi||_{d_pi}.
BoundReport muzero_reward_decomposition_check(const TabularMdp& env,
                                              const TabularMdp& model,
                                              const Policy& policy,
                                              const StateFunction& v, int n,
                                              int K, double teleport_eps = 1e-3);

}  // namespace pvelab
