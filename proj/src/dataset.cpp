#include "pvelab/dataset.hpp"

#include <algorithm>

namespace pvelab {

Policy sample_random_policy(Rng& rng, int n_states, int n_actions,
                            PolicyMode mode) {
    Mat probs(n_states, n_actions);
    if (mode == PolicyMode::Deterministic) {
        probs.setZero();
        for (int s = 0; s < n_states; ++s) {
            probs(s, rng.next_int(n_actions)) = 1.0;
        }
    } else {
        for (int s = 0; s < n_states; ++s) {
            double sum = 0.0;
            for (int a = 0; a < n_actions; ++a) {
                probs(s, a) = rng.next_double();
                sum += probs(s, a);
            }
            probs.row(s) /= sum;
        }
    }
    return Policy(std::move(probs));
}

StateFunction sample_random_function(Rng& rng, int n_states, double lo,
                                     double hi) {
    if (!(lo < hi)) {
        throw std::invalid_argument("sample_random_function: lo must be < hi");
    }
    Vec v(n_states);
    for (int s = 0; s < n_states; ++s) v(s) = rng.uniform(lo, hi);
    return v;
}

std::vector<Policy> generate_pi_policies(const TabularMdp& env,
                                         int target_count,
                                         double update_fraction,
                                         std::uint64_t seed) {
    if (target_count < 1) {
        throw std::invalid_argument("generate_pi_policies: target_count must be >= 1");
    }
    Rng rng(seed);
    std::vector<Policy> stored;
    stored.reserve(target_count);

    const int n = env.n_states;
    const int subset_size = std::max(1, static_cast<int>(update_fraction * n));

    while (static_cast<int>(stored.size()) < target_count) {
        Policy current =
            sample_random_policy(rng, n, env.n_actions, PolicyMode::Deterministic);
        stored.push_back(current);
        while (static_cast<int>(stored.size()) < target_count) {
            const Vec values = policy_evaluation(env, current);
            const Policy improved = greedy_policy(env, values);
            if (improved.probs == current.probs) {
                break;   // greedy fixed point: restart from a fresh policy
            }
            // Improve only at a random subset of states; resample the subset
            // up to 10 times if it happens to contain no change, then fall
            // back to the first differing state.
            bool changed = false;
            Policy next = current;
            for (int attempt = 0; attempt < 10 && !changed; ++attempt) {
                next = current;
                std::vector<int> order(n);
                for (int s = 0; s < n; ++s) order[s] = s;
                for (int s = n - 1; s > 0; --s) {
                    std::swap(order[s], order[rng.next_int(s + 1)]);
                }
                for (int i = 0; i < subset_size; ++i) {
                    const int s = order[i];
                    if (next.probs.row(s) != improved.probs.row(s)) {
                        next.probs.row(s) = improved.probs.row(s);
                        changed = true;
                    }
                }
            }
            if (!changed) {
                for (int s = 0; s < n; ++s) {
                    if (next.probs.row(s) != improved.probs.row(s)) {
                        next.probs.row(s) = improved.probs.row(s);
                        break;
                    }
                }
            }
            current = next;
            stored.push_back(current);
        }
    }
    stored.resize(target_count, stored.back());
    return stored;
}

std::vector<Policy> augment_with_noise(const Policy& policy, PolicyMode mode,
                                       double fraction, int copies, Rng& rng) {
    if (fraction <= 0.0 || fraction > 1.0) {
        throw std::invalid_argument("augment_with_noise: fraction outside (0, 1]");
    }
    const int n = policy.n_states();
    const int n_actions = policy.n_actions();
    const int subset_size = std::max(1, static_cast<int>(fraction * n));

    std::vector<Policy> out;
    out.reserve(copies);
    for (int c = 0; c < copies; ++c) {
        Policy noisy = policy;
        std::vector<int> order(n);
        for (int s = 0; s < n; ++s) order[s] = s;
        for (int s = n - 1; s > 0; --s) {
            std::swap(order[s], order[rng.next_int(s + 1)]);
        }
        for (int i = 0; i < subset_size; ++i) {
            const int s = order[i];
            if (mode == PolicyMode::Stochastic) {
                noisy.probs.row(s).setConstant(1.0 / n_actions);
            } else {
                noisy.probs.row(s).setZero();
                noisy.probs(s, rng.next_int(n_actions)) = 1.0;
            }
        }
        out.push_back(std::move(noisy));
    }
    return out;
}

PolicyValueDataset label_with_values(const TabularMdp& env,
                                     const std::vector<Policy>& policies) {
    PolicyValueDataset dataset;
    dataset.semantics = PolicyValueDataset::Semantics::ExactValues;
    dataset.policies = policies;
    dataset.functions.reserve(policies.size());
    for (const Policy& pi : policies) {
        dataset.functions.push_back(policy_evaluation(env, pi));
    }
    return dataset;
}

PolicyValueDataset build_dataset(const TabularMdp& env,
                                 const DatasetSpec& spec) {
    if (spec.count < 1) {
        throw std::invalid_argument("build_dataset: count must be >= 1");
    }
    Rng rng(spec.seed);
    if (spec.kind == DatasetSpec::Kind::RandomMixed) {
        PolicyValueDataset dataset;
        dataset.semantics = PolicyValueDataset::Semantics::ArbitraryFunctions;
        for (int i = 0; i < spec.count; ++i) {
            const PolicyMode mode = rng.next_double() < 0.5
                                        ? PolicyMode::Deterministic
                                        : PolicyMode::Stochastic;
            dataset.policies.push_back(
                sample_random_policy(rng, env.n_states, env.n_actions, mode));
            dataset.functions.push_back(sample_random_function(rng, env.n_states));
        }
        return dataset;
    }

    const PolicyMode mode = spec.kind == DatasetSpec::Kind::PiDerivedStochastic
                                ? PolicyMode::Stochastic
                                : PolicyMode::Deterministic;
    const int base_count =
        std::max(1, spec.count / std::max(1, spec.augment_per_policy));
    const std::vector<Policy> bases =
        generate_pi_policies(env, base_count, 0.1, rng.next_u64());
    std::vector<Policy> all;
    all.reserve(spec.count);
    for (const Policy& base : bases) {
        for (Policy& p :
             augment_with_noise(base, mode, spec.noise_fraction,
                                spec.augment_per_policy, rng)) {
            if (static_cast<int>(all.size()) < spec.count) {
                all.push_back(std::move(p));
            }
        }
    }
    while (static_cast<int>(all.size()) < spec.count) {
        all.push_back(all[all.size() % bases.size()]);
    }
    return label_with_values(env, all);
}

}  // namespace pvelab
