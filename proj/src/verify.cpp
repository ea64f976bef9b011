#include "pvelab/verify.hpp"

#include <cmath>

#include "pvelab/dataset.hpp"
#include "pvelab/dp.hpp"
#include "pvelab/envs.hpp"
#include "pvelab/losses.hpp"

namespace pvelab {

namespace {

CheckResult make_check(std::string suite, std::string name, double lhs,
                       double rhs, bool passed, std::uint64_t seed,
                       std::string detail = "") {
    CheckResult r;
    r.suite = std::move(suite);
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.passed = passed;
    r.seed = seed;
    r.detail = std::move(detail);
    return r;
}

/// Lifts a base-MDP policy to the (x, y) product so it ignores y.
Policy lift_policy(const Policy& base, int y_size) {
    const int nx = base.n_states();
    Mat probs(nx * y_size, base.n_actions());
    for (int x = 0; x < nx; ++x) {
        for (int y = 0; y < y_size; ++y) {
            probs.row(FactoredState::flatten(x, y, y_size)) = base.probs.row(x);
        }
    }
    return Policy(std::move(probs));
}

PolicyValueDataset single_policy_function_batch(const Policy& policy,
                                                std::vector<Vec> functions) {
    PolicyValueDataset batch;
    batch.semantics = PolicyValueDataset::Semantics::ArbitraryFunctions;
    for (Vec& f : functions) {
        batch.policies.push_back(policy);
        batch.functions.push_back(std::move(f));
    }
    return batch;
}

}  // namespace

TabularMdp random_mdp(Rng& rng, int n_states, int n_actions, double discount) {
    Mat reward(n_states, n_actions);
    std::vector<Mat> transition(n_actions, Mat(n_states, n_states));
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            reward(s, a) = rng.uniform(-1.0, 1.0);
        }
    }
    for (int a = 0; a < n_actions; ++a) {
        for (int s = 0; s < n_states; ++s) {
            double sum = 0.0;
            for (int s2 = 0; s2 < n_states; ++s2) {
                transition[a](s, s2) = rng.next_double() + 1e-12;
                sum += transition[a](s, s2);
            }
            transition[a].row(s) /= sum;
        }
    }
    return TabularMdp(std::move(reward), std::move(transition), discount);
}

std::vector<CheckResult> run_proposition_fixtures(std::uint64_t seed) {
    std::vector<CheckResult> results;
    Rng rng(derive_seed(seed, "fixtures", 0));

    // --- Ring / false-ring lemmas -------------------------------------------
    const int ring_n = 5;
    const double gamma = 0.9;
    std::vector<double> ring_rewards(ring_n);
    for (double& r : ring_rewards) r = rng.uniform(-1.0, 1.0);
    RingSpec spec;
    spec.n = ring_n;
    spec.discount = gamma;
    spec.g = [ring_rewards](int i) { return ring_rewards[i - 1]; };

    const TabularMdp ring = build_ring(spec);
    const TabularMdp false_ring = build_false_ring(spec);
    const Policy only = Policy::uniform(ring_n, 1);

    // Finite Lemma 7: the n-step operators of the pair agree on every function.
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Vec v = sample_random_function(rng, ring_n, -10.0, 10.0);
        const Vec gap = k_step_bellman(ring, only, v, ring_n) -
                        k_step_bellman(false_ring, only, v, ring_n);
        worst = std::max(worst, sup_norm(gap));
    }
    results.push_back(make_check("propositions", "lemma7_finite_equality",
                                 worst, 1e-9, worst < 1e-9, seed,
                                 "max over 100 random v"));

    // Infinite analog: normalizing by (1 - gamma) v_pi makes values match.
    {
        const TabularMdp infinite = build_false_ring_infinite(spec);
        const double gap = sup_norm(policy_evaluation(ring, only) -
                                    policy_evaluation(infinite, only));
        results.push_back(make_check("propositions", "lemma7_infinite_values",
                                     gap, 1e-9, gap < 1e-9, seed));
    }

    // Lemma 8: with an indicator reward the pair separates below order n.
    {
        const int k_small = 3;
        RingSpec indicator = spec;
        indicator.g = [k_small](int i) { return i <= k_small ? 1.0 : 0.0; };
        const TabularMdp ring_ind = build_ring(indicator);
        const TabularMdp false_ind = build_false_ring(indicator);
        const Vec constant = Vec::Constant(ring_n, 0.7);
        const double gap =
            std::abs(k_step_bellman(ring_ind, only, constant, k_small)(0) -
                     k_step_bellman(false_ind, only, constant, k_small)(0));
        results.push_back(make_check("propositions", "lemma8_separation", gap,
                                     1e-6, gap > 1e-6, seed,
                                     "|T^k f - T~^k f| at s1, k=3 < n=5"));
    }

    // --- Prop. 1 witnesses: order-K membership, order-k violation, inclusion.
    {
        const int big = 6, small = 3;   // small | big
        RingSpec spec6;
        spec6.n = big;
        spec6.discount = gamma;
        spec6.g = [small](int i) { return i <= small ? 1.0 : 0.0; };
        const TabularMdp ring6 = build_ring(spec6);
        const TabularMdp false6 = build_false_ring(spec6);
        const Policy only6 = Policy::uniform(big, 1);

        std::vector<Vec> funcs;
        for (int trial = 0; trial < 20; ++trial) {
            funcs.push_back(sample_random_function(rng, big, -10.0, 10.0));
        }
        const PolicyValueDataset batch =
            single_policy_function_batch(only6, funcs);
        const double member = order_k_ve_loss(false6, ring6, batch, big);
        results.push_back(make_check("propositions", "prop1_order6_membership",
                                     member, 1e-12, member < 1e-12, seed));

        const PolicyValueDataset const_batch = single_policy_function_batch(
            only6, {Vec::Constant(big, 0.7), Vec::Zero(big)});
        const double violation =
            order_k_ve_loss(false6, ring6, const_batch, small);
        results.push_back(make_check("propositions", "prop1_order3_violation",
                                     violation, 1e-6, violation > 1e-6, seed));
    }
    {
        // Order inclusion at loss level: zero order-3 loss implies zero
        // order-6 loss for the false-ring witness and the perfect model.
        RingSpec spec3;
        spec3.n = 3;
        spec3.discount = gamma;
        spec3.g = [ring_rewards](int i) { return ring_rewards[i - 1]; };
        const TabularMdp ring3 = build_ring(spec3);
        const TabularMdp false3 = build_false_ring(spec3);
        const Policy only3 = Policy::uniform(3, 1);
        std::vector<Vec> funcs;
        for (int trial = 0; trial < 20; ++trial) {
            funcs.push_back(sample_random_function(rng, 3, -10.0, 10.0));
        }
        const PolicyValueDataset batch =
            single_policy_function_batch(only3, funcs);
        const double base = order_k_ve_loss(false3, ring3, batch, 3);
        const double doubled = order_k_ve_loss(false3, ring3, batch, 6);
        const double perfect = order_k_ve_loss(ring3, ring3, batch, 6);
        const double worst_incl = std::max(doubled, perfect);
        results.push_back(make_check(
            "propositions", "prop1_order_inclusion", worst_incl, 1e-10,
            base < 1e-12 && worst_incl < 1e-10, seed,
            "order-3 members stay members at order 6"));
    }

    // --- Prop. 3: superfluous y-component and the m_{y0} model --------------
    {
        const int y_size = 2, y0 = 0;
        const TabularMdp base = random_mdp(rng, 3, 2, gamma);
        const TabularMdp env = build_superfluous_product(base, y_size);
        const TabularMdp m_y0 = build_y0_model(env, y_size, y0);

        std::vector<Policy> lifted;
        lifted.push_back(lift_policy(Policy::uniform(3, 2), y_size));
        for (int trial = 0; trial < 4; ++trial) {
            const PolicyMode mode = trial % 2 == 0 ? PolicyMode::Deterministic
                                                   : PolicyMode::Stochastic;
            lifted.push_back(lift_policy(sample_random_policy(rng, 3, 2, mode),
                                         y_size));
        }
        const PolicyValueDataset values = label_with_values(env, lifted);
        const double member = pve_loss(m_y0, env, values);
        results.push_back(make_check("propositions", "prop3_pve_membership",
                                     member, 1e-12, member < 1e-12, seed,
                                     "y-ignoring policies"));

        Vec indicator(env.n_states);
        for (int x = 0; x < 3; ++x) {
            for (int y = 0; y < y_size; ++y) {
                indicator(FactoredState::flatten(x, y, y_size)) =
                    y != y0 ? 1.0 : 0.0;
            }
        }
        const Policy uniform = lift_policy(Policy::uniform(3, 2), y_size);
        const double gap =
            sup_norm(bellman_operator(env, uniform, indicator) -
                     bellman_operator(m_y0, uniform, indicator));
        results.push_back(make_check("propositions", "prop3_order1_violation",
                                     gap, 1e-6, gap > 1e-6, seed,
                                     "indicator function 1{y != y0}"));
    }

    // --- Prop. 5: deterministic agreement, stochastic separation ------------
    {
        const auto [env, model] = build_det_stoch_counterexample();
        double det_worst = 0.0;
        for (int a1 = 0; a1 < 2; ++a1) {
            for (int a2 = 0; a2 < 2; ++a2) {
                for (int a3 = 0; a3 < 2; ++a3) {
                    const Policy pi =
                        Policy::deterministic_from_actions({a1, a2, a3}, 2);
                    det_worst = std::max(
                        det_worst, sup_norm(policy_evaluation(env, pi) -
                                            policy_evaluation(model, pi)));
                }
            }
        }
        results.push_back(make_check("propositions", "prop5_deterministic_match",
                                     det_worst, 1e-10, det_worst < 1e-10, seed,
                                     "max over all 8 deterministic policies"));
        const Policy uniform = Policy::uniform(3, 2);
        const double gap = sup_norm(policy_evaluation(env, uniform) -
                                    policy_evaluation(model, uniform));
        results.push_back(make_check("propositions", "prop5_stochastic_gap",
                                     gap, 1e-8, gap > 1e-8, seed,
                                     "uniform policy"));
    }

    return results;
}

std::vector<CheckResult> run_bound_suites(std::uint64_t seed, int count,
                                          double teleport_eps) {
    std::vector<CheckResult> results;
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, "bound-tuple", i));
        const int n_states = 4 + rng.next_int(3);
        const int n_actions = 2 + rng.next_int(2);
        const double discount = rng.uniform(0.9, 0.99);
        const TabularMdp env = random_mdp(rng, n_states, n_actions, discount);
        const TabularMdp model = random_mdp(rng, n_states, n_actions, discount);
        const Policy policy =
            sample_random_policy(rng, n_states, n_actions,
                                 rng.next_double() < 0.5
                                     ? PolicyMode::Deterministic
                                     : PolicyMode::Stochastic);
        const Vec v = sample_random_function(rng, n_states, -1.0, 1.0);
        const int k = 1 + rng.next_int(3);
        const int n = 1 + rng.next_int(3);
        const int K = 1 + rng.next_int(3);
        const std::string name = "tuple-" + std::to_string(i);

        const BoundReport sup = verify_pve_bound(env, model, policy, v, k, n);
        results.push_back(make_check("prop6_sup_bound", name, sup.lhs, sup.rhs,
                                     sup.satisfied, seed));
        const BoundReport weighted =
            verify_weighted_bound(env, model, policy, v, k, n, teleport_eps);
        CheckResult weighted_check =
            make_check("prop10_weighted_bound", name, weighted.lhs,
                       weighted.rhs, weighted.satisfied, seed, weighted.note);
        weighted_check.components["g"] = weighted.components.at("g");
        results.push_back(std::move(weighted_check));
        const BoundReport muzero =
            muzero_bound_check(env, model, policy, v, n, K, teleport_eps);
        CheckResult muzero_check =
            make_check("muzero_chain", name, muzero.lhs, muzero.rhs,
                       muzero.satisfied, seed, muzero.note);
        muzero_check.components["g"] = muzero.components.at("g");
        muzero_check.components["a"] = muzero.components.at("a");
        muzero_check.components["b"] = muzero.components.at("b");
        results.push_back(std::move(muzero_check));
        const BoundReport decomp = muzero_reward_decomposition_check(
            env, model, policy, v, n, K, teleport_eps);
        results.push_back(make_check("muzero_reward_decomposition", name,
                                     decomp.lhs, decomp.rhs, decomp.satisfied,
                                     seed));
    }
    return results;
}

}  // namespace pvelab
