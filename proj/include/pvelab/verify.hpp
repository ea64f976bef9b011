#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pvelab/bounds.hpp"
#include "pvelab/mdp.hpp"
#include "pvelab/rng.hpp"

namespace pvelab {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    double lhs = 0.0;
    double rhs = 0.0;
    std::uint64_t seed = 0;
    std::string detail;
    std::map<std::string, double> components;   // g, a, b where applicable
};

/// Random MDP with row-stochastic transitions (Dirichlet-like rows from
/// normalized U(0,1) weights) and rewards ~ U(-1, 1).
TabularMdp random_mdp(Rng& rng, int n_states, int n_actions, double discount);

/// Ring/false-ring equalities and separations, the y0-model membership and
/// order-1 violation, the deterministic/stochastic counterexample pair, and
/// the order-inclusion witnesses. Deterministic apart from the seeded
/// random-function draws.
std::vector<CheckResult> run_proposition_fixtures(std::uint64_t seed);

/// Randomized suites for the sup-norm bound, the weighted bound, and the
/// model-loss inequality chain: `count` tuples each on 4-6 state MDPs with
/// k, n, K <= 3.
std::vector<CheckResult> run_bound_suites(std::uint64_t seed, int count,
                                          double teleport_eps = 1e-3);

}  // namespace pvelab
