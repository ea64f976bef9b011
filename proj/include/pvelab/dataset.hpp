#pragma once

#include <cstdint>
#include <vector>

#include "pvelab/dp.hpp"
#include "pvelab/mdp.hpp"
#include "pvelab/rng.hpp"

namespace pvelab {

enum class PolicyMode { Deterministic, Stochastic };

/// Collection of (policy, target-function) pairs consumed by the losses.
/// In exact-values mode each function is the policy's value function in the
/// reference environment.
struct PolicyValueDataset {
    enum class Semantics { ArbitraryFunctions, ExactValues };

    std::vector<Policy> policies;
    std::vector<StateFunction> functions;
    Semantics semantics = Semantics::ArbitraryFunctions;

    std::size_t size() const { return policies.size(); }
};

struct DatasetSpec {
    enum class Kind { RandomMixed, PiDerivedStochastic, PiDerivedDeterministic };

    int count = 1;
    Kind kind = Kind::RandomMixed;
    double noise_fraction = 0.1;
    int augment_per_policy = 100;
    std::uint64_t seed = 0;
};

/// det mode: independent uniform action per state; stoch mode: per-state
/// U(0,1) weights normalized to sum to 1.
Policy sample_random_policy(Rng& rng, int n_states, int n_actions,
                            PolicyMode mode);

StateFunction sample_random_function(Rng& rng, int n_states, double lo = -1.0,
                                     double hi = 1.0);

/// Repeatedly runs policy iteration from random deterministic starts,
/// improving the policy only at a uniformly chosen update_fraction of states
/// per step and storing each intermediate, until target_count policies exist.
std::vector<Policy> generate_pi_policies(const TabularMdp& env,
                                         int target_count,
                                         double update_fraction,
                                         std::uint64_t seed);

/// Replaces the distribution at ~fraction of states with a uniform (stoch) or
/// random deterministic (det) distribution, `copies` times.
std::vector<Policy> augment_with_noise(const Policy& policy, PolicyMode mode,
                                       double fraction, int copies, Rng& rng);

/// Pairs each policy with its exact evaluation under env.
PolicyValueDataset label_with_values(const TabularMdp& env,
                                     const std::vector<Policy>& policies);

/// Materializes a DatasetSpec against env. RandomMixed pairs random policies
/// (50/50 det/stoch) with U(-1,1) functions; the pi-derived kinds follow the
/// generate/augment/label pipeline.
PolicyValueDataset build_dataset(const TabularMdp& env, const DatasetSpec& spec);

}  // namespace pvelab
