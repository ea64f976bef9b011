#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pvelab/dp.hpp"
#include "pvelab/dataset.hpp"
#include "pvelab/envs.hpp"
#include "pvelab/verify.hpp"

using namespace pvelab;

TEST_CASE("serial reference matches vectorized kernels on random MDPs") {
    Rng rng(281);
    for (int i = 0; i < 30; ++i) {
        const int n_states = 2 + rng.next_int(9);
        const int n_actions = 1 + rng.next_int(4);
        const TabularMdp mdp = random_mdp(rng, n_states, n_actions, 0.95);
        const Policy pi = sample_random_policy(
            rng, n_states, n_actions,
            i % 2 == 0 ? PolicyMode::Deterministic : PolicyMode::Stochastic);
        const Vec v = sample_random_function(rng, n_states, -10.0, 10.0);

        CHECK(sup_norm(serial::bellman_operator(mdp, pi, v) -
                       bellman_operator(mdp, pi, v)) < 1e-12);
        const int k = 1 + rng.next_int(5);
        CHECK(sup_norm(serial::k_step_bellman(mdp, pi, v, k) -
                       k_step_bellman(mdp, pi, v, k)) < 1e-12);
        CHECK(sup_norm(serial::transition_operator_k(mdp, pi, v, k) -
                       transition_operator_k(mdp, pi, v, k)) < 1e-12);
        CHECK(sup_norm(serial::transition_operator_k(mdp, pi, v, 0) - v) == 0.0);
    }
}

TEST_CASE("serial reference matches vectorized kernels on Four Rooms") {
    const TabularMdp env = build_four_rooms(0.2, 0.99);
    Rng rng(283);
    for (int i = 0; i < 5; ++i) {
        const Policy pi = sample_random_policy(rng, env.n_states, env.n_actions,
                                               PolicyMode::Stochastic);
        const Vec v = sample_random_function(rng, env.n_states, -1.0, 1.0);
        CHECK(sup_norm(serial::bellman_operator(env, pi, v) -
                       bellman_operator(env, pi, v)) < 1e-12);
        CHECK(sup_norm(serial::k_step_bellman(env, pi, v, 10) -
                       k_step_bellman(env, pi, v, 10)) < 1e-12);
        CHECK(sup_norm(serial::transition_operator_k(env, pi, v, 10) -
                       transition_operator_k(env, pi, v, 10)) < 1e-12);
    }
}
