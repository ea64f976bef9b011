#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pvelab/bounds.hpp"
#include "pvelab/dp.hpp"
#include "pvelab/verify.hpp"

using namespace pvelab;

namespace {

Policy random_policy(Rng& rng, int n_states, int n_actions) {
    Mat probs(n_states, n_actions);
    for (int s = 0; s < n_states; ++s) {
        double sum = 0.0;
        for (int a = 0; a < n_actions; ++a) {
            probs(s, a) = rng.uniform(0.05, 1.0);
            sum += probs(s, a);
        }
        probs.row(s) /= sum;
    }
    return Policy{probs};
}

}  // namespace

TEST_CASE("verify_pve_bound: v = v_pi makes the bound an equality") {
    Rng rng(211);
    for (int i = 0; i < 20; ++i) {
        const TabularMdp env = random_mdp(rng, 5, 2, 0.9);
        const TabularMdp model = random_mdp(rng, 5, 2, 0.9);
        const Policy pi = random_policy(rng, 5, 2);
        const Vec v_pi = policy_evaluation(env, pi);
        const BoundReport report = verify_pve_bound(env, model, pi, v_pi, 2, 3);
        CHECK(report.satisfied);
        // T_pi^n v_pi = v_pi, so lhs equals the eps_ve term exactly and the
        // eps_v term vanishes.
        CHECK(report.components.at("eps_v") == 0.0);
        CHECK(report.lhs == doctest::Approx(report.rhs).epsilon(1e-12));
    }
}

TEST_CASE("verify_pve_bound: a perfect model has lhs = 0") {
    Rng rng(223);
    const TabularMdp env = random_mdp(rng, 4, 3, 0.95);
    const Policy pi = random_policy(rng, 4, 3);
    const Vec v_pi = policy_evaluation(env, pi);
    const BoundReport report = verify_pve_bound(env, env, pi, v_pi, 1, 1);
    CHECK(report.lhs < 1e-10);
    CHECK(report.satisfied);

    CHECK_THROWS_AS(verify_pve_bound(env, env, pi, v_pi, 0, 1),
                    std::invalid_argument);
}

TEST_CASE("verify_pve_bound holds for random tuples with arbitrary v") {
    Rng rng(227);
    for (int i = 0; i < 50; ++i) {
        const TabularMdp env = random_mdp(rng, 4, 2, 0.9);
        const TabularMdp model = random_mdp(rng, 4, 2, 0.9);
        const Policy pi = random_policy(rng, 4, 2);
        Vec v(4);
        for (int s = 0; s < 4; ++s) v(s) = rng.uniform(-5.0, 5.0);
        const int k = 1 + rng.next_int(3);
        const int n = 1 + rng.next_int(3);
        const BoundReport report = verify_pve_bound(env, model, pi, v, k, n);
        CHECK(report.satisfied);
    }
}

TEST_CASE("verify_weighted_bound: empirical g never exceeds 1/sqrt(min d)") {
    Rng rng(229);
    for (int i = 0; i < 30; ++i) {
        const TabularMdp env = random_mdp(rng, 5, 2, 0.9);
        const TabularMdp model = random_mdp(rng, 5, 2, 0.9);
        const Policy pi = random_policy(rng, 5, 2);
        Vec v(5);
        for (int s = 0; s < 5; ++s) v(s) = rng.uniform(-5.0, 5.0);
        const BoundReport report =
            verify_weighted_bound(env, model, pi, v, 2, 2);
        CHECK(report.satisfied);
        CHECK(report.components.at("g") <=
              report.components.at("g_conservative") + 1e-9);

        // Independently recompute g against the stationary distribution.
        const Vec v_pi = policy_evaluation(env, pi);
        const StateDistribution d = stationary_distribution(env, pi, 1e-3);
        const double expected =
            sup_norm(v_pi - v) / weighted_norm(v_pi - v, d);
        CHECK(report.components.at("g") ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("verify_weighted_bound: v = v_pi falls back to g = 1 with a note") {
    Rng rng(233);
    const TabularMdp env = random_mdp(rng, 4, 2, 0.9);
    const TabularMdp model = random_mdp(rng, 4, 2, 0.9);
    const Policy pi = random_policy(rng, 4, 2);
    const Vec v_pi = policy_evaluation(env, pi);
    const BoundReport report = verify_weighted_bound(env, model, pi, v_pi, 1, 2);
    CHECK(report.components.at("g") == 1.0);
    CHECK_FALSE(report.note.empty());
    CHECK(report.satisfied);
}

TEST_CASE("muzero_bound_check: perfect model with v = v_pi is trivially tight") {
    Rng rng(239);
    const TabularMdp env = random_mdp(rng, 4, 2, 0.95);
    const Policy pi = random_policy(rng, 4, 2);
    const Vec v_pi = policy_evaluation(env, pi);
    const BoundReport report = muzero_bound_check(env, env, pi, v_pi, 2, 2);
    CHECK(report.lhs < 1e-18);
    CHECK(report.components.at("loss_lower_bound") < 1e-18);
    CHECK(report.satisfied);
    CHECK(report.components.at("b") ==
          doctest::Approx(report.components.at("a") + 4.0));
}

TEST_CASE("muzero chain holds on random tuples with gamma >= 0.9") {
    Rng rng(241);
    for (int i = 0; i < 40; ++i) {
        const double gamma = rng.uniform(0.9, 0.99);
        const TabularMdp env = random_mdp(rng, 5, 2, gamma);
        const TabularMdp model = random_mdp(rng, 5, 2, gamma);
        const Policy pi = random_policy(rng, 5, 2);
        Vec v(5);
        for (int s = 0; s < 5; ++s) v(s) = rng.uniform(-2.0, 2.0);
        const int n = 1 + rng.next_int(3);
        const int K = 1 + rng.next_int(3);
        const BoundReport bound = muzero_bound_check(env, model, pi, v, n, K);
        CHECK(bound.satisfied);
        const BoundReport decomp =
            muzero_reward_decomposition_check(env, model, pi, v, n, K);
        CHECK(decomp.satisfied);
    }
}

TEST_CASE("muzero loss lower bound matches a Monte-Carlo estimate under d_pi") {
    Rng rng(251);
    const TabularMdp env = random_mdp(rng, 5, 2, 0.95);
    const TabularMdp model = random_mdp(rng, 5, 2, 0.95);
    const Policy pi = random_policy(rng, 5, 2);
    Vec v(5);
    for (int s = 0; s < 5; ++s) v(s) = rng.uniform(-2.0, 2.0);
    const int n = 2, K = 2;
    const BoundReport report = muzero_bound_check(env, model, pi, v, n, K);
    const double analytic = report.components.at("loss_lower_bound");

    // Per-state loss whose d_pi expectation the analytic bound equals.
    const StateDistribution d = stationary_distribution(env, pi, 1e-3);
    const Vec tn_v = k_step_bellman(env, pi, v, n);
    const Vec r_pi = policy_reward(env, pi);
    const Vec r_model = policy_reward(model, pi);
    Vec per_state = (tn_v - v).array().square();
    per_state += (transition_operator_k(env, pi, tn_v, K) -
                  transition_operator_k(model, pi, v, K))
                     .array()
                     .square()
                     .matrix();
    for (int j = 0; j <= K; ++j) {
        per_state += (transition_operator_k(env, pi, r_pi, j) -
                      transition_operator_k(model, pi, r_model, j))
                         .array()
                         .square()
                         .matrix();
    }

    const int draws = 100000;
    double sum = 0.0, sum_sq = 0.0;
    Rng sampler(derive_seed(251, "mc", 0));
    for (int i = 0; i < draws; ++i) {
        const double u = sampler.next_double();
        double cum = 0.0;
        int s = env.n_states - 1;
        for (int j = 0; j < env.n_states; ++j) {
            cum += d(j);
            if (u < cum) {
                s = j;
                break;
            }
        }
        sum += per_state(s);
        sum_sq += per_state(s) * per_state(s);
    }
    const double mean = sum / draws;
    const double variance = sum_sq / draws - mean * mean;
    const double stderr_mc = std::sqrt(variance / draws);
    CHECK(std::abs(analytic - mean) <= 3.0 * stderr_mc);
}
