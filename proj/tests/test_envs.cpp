#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pvelab/dataset.hpp"
#include "pvelab/dp.hpp"
#include "pvelab/envs.hpp"
#include "pvelab/rng.hpp"
#include "pvelab/verify.hpp"

using namespace pvelab;

namespace {

RingSpec ring_spec(int n, std::function<double(int)> g, double discount) {
    RingSpec spec;
    spec.n = n;
    spec.g = std::move(g);
    spec.discount = discount;
    return spec;
}

}  // namespace

TEST_CASE("Four Rooms dimensions and validity") {
    const TabularMdp env = build_four_rooms(0.2, 0.99);
    CHECK(env.n_states == 104);
    CHECK(env.n_actions == 4);
    CHECK_NOTHROW(env.validate());
}

TEST_CASE("Four Rooms: slip = 0 gives deterministic rows") {
    const TabularMdp env = build_four_rooms(0.0, 0.99);
    for (int a = 0; a < 4; ++a) {
        for (int s = 0; s < env.n_states; ++s) {
            CHECK(env.transition[a].row(s).maxCoeff() ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("Four Rooms: inclusive slip realizes the intended move with 0.85") {
    const TabularMdp env = build_four_rooms(0.2, 0.99);
    const FourRoomsLayout& layout = four_rooms_layout();
    // Center of the lower-left room: all four neighbors open and distinct.
    const int s = layout.state_of_cell[8 * layout.width + 2];
    REQUIRE(s >= 0);
    for (int a = 0; a < 4; ++a) {
        CHECK(env.transition[a].row(s).maxCoeff() == doctest::Approx(0.85));
    }
    // Exclusive reading: intended direction keeps exactly 0.8.
    const TabularMdp excl = build_four_rooms(0.2, 0.99, false);
    for (int a = 0; a < 4; ++a) {
        CHECK(excl.transition[a].row(s).maxCoeff() == doctest::Approx(0.8));
    }
}

TEST_CASE("Four Rooms: reward equals goal-entry probability, goal not absorbing") {
    const TabularMdp env = build_four_rooms(0.2, 0.99);
    const FourRoomsLayout& layout = four_rooms_layout();
    for (int s = 0; s < env.n_states; ++s) {
        for (int a = 0; a < 4; ++a) {
            CHECK(env.reward(s, a) ==
                  doctest::Approx(env.transition[a](s, layout.goal_state)));
        }
    }
    // Continuing dynamics: the goal state has ordinary moves out of it.
    bool leaves_goal = false;
    for (int a = 0; a < 4; ++a) {
        if (env.transition[a](layout.goal_state, layout.goal_state) < 1.0 - 1e-9) {
            leaves_goal = true;
        }
    }
    CHECK(leaves_goal);
}

TEST_CASE("build_ring shapes and returns") {
    const TabularMdp one = build_ring(ring_spec(1, [](int) { return 3.0; }, 0.5));
    CHECK(one.n_states == 1);
    CHECK(one.transition[0](0, 0) == 1.0);
    CHECK(one.reward(0, 0) == 3.0);

    const TabularMdp ring =
        build_ring(ring_spec(3, [](int i) { return double(i); }, 0.5));
    CHECK(k_step_bellman(ring, Policy::uniform(3, 1), Vec::Zero(3), 3)(0) ==
          doctest::Approx(2.75));

    // Indicator reward on {1, 2}: steps 3..5 from s1 yield nothing.
    const TabularMdp ind =
        build_ring(ring_spec(5, [](int i) { return i <= 2 ? 1.0 : 0.0; }, 0.5));
    int s = 0;
    double reward_after_2 = 0.0;
    for (int t = 0; t < 5; ++t) {
        if (t >= 2) reward_after_2 += ind.reward(s, 0);
        s = (s + 1) % 5;
    }
    CHECK(reward_after_2 == 0.0);
}

TEST_CASE("build_false_ring normalization and value match") {
    const RingSpec spec = ring_spec(3, [](int i) { return double(i); }, 0.5);
    const TabularMdp false_ring = build_false_ring(spec);
    CHECK(false_ring.reward(0, 0) == doctest::Approx(11.0 / 7.0));
    CHECK(policy_evaluation(false_ring, Policy::uniform(3, 1))(0) ==
          doctest::Approx(22.0 / 7.0));

    // n = 1: the single-state false-ring is the ring itself.
    const RingSpec single = ring_spec(1, [](int) { return 2.0; }, 0.5);
    const TabularMdp r1 = build_ring(single);
    const TabularMdp f1 = build_false_ring(single);
    CHECK(r1.reward(0, 0) == doctest::Approx(f1.reward(0, 0)));
    CHECK(r1.transition[0](0, 0) == f1.transition[0](0, 0));
}

TEST_CASE("Lemma 7: ring and false-ring n-step operators agree on 100 random v") {
    const RingSpec spec = ring_spec(4, [](int i) { return 0.3 * i - 1.0; }, 0.8);
    const TabularMdp ring = build_ring(spec);
    const TabularMdp false_ring = build_false_ring(spec);
    const Policy pi = Policy::uniform(4, 1);
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec v = sample_random_function(rng, 4, -10.0, 10.0);
        CHECK(sup_norm(k_step_bellman(ring, pi, v, 4) -
                       k_step_bellman(false_ring, pi, v, 4)) < 1e-9);
    }
}

TEST_CASE("Lemma 7 infinite analog: (1 - gamma) v_pi normalization") {
    const RingSpec spec = ring_spec(4, [](int i) { return 0.3 * i - 1.0; }, 0.8);
    const TabularMdp ring = build_ring(spec);
    const TabularMdp infinite = build_false_ring_infinite(spec);
    const Policy pi = Policy::uniform(4, 1);
    CHECK(sup_norm(policy_evaluation(ring, pi) -
                   policy_evaluation(infinite, pi)) < 1e-9);
}

TEST_CASE("Lemma 8: separation below the ring order") {
    const int K = 5, k = 3;
    const RingSpec spec =
        ring_spec(K, [k](int i) { return i <= k ? 1.0 : 0.0; }, 0.9);
    const TabularMdp ring = build_ring(spec);
    const TabularMdp false_ring = build_false_ring(spec);
    const Policy pi = Policy::uniform(K, 1);
    const Vec f = Vec::Constant(K, 2.0);
    CHECK(std::abs(k_step_bellman(ring, pi, f, k)(0) -
                   k_step_bellman(false_ring, pi, f, k)(0)) > 1e-6);
}

TEST_CASE("superfluous product rejects |Y| < 2 and copies rewards per slice") {
    Rng rng(43);
    const TabularMdp base = random_mdp(rng, 3, 2, 0.9);
    CHECK_THROWS_AS(build_superfluous_product(base, 1), std::invalid_argument);

    const TabularMdp env = build_superfluous_product(base, 3);
    CHECK(env.n_states == 9);
    for (int x = 0; x < 3; ++x) {
        for (int y = 0; y < 3; ++y) {
            for (int a = 0; a < 2; ++a) {
                CHECK(env.reward(FactoredState::flatten(x, y, 3), a) ==
                      base.reward(x, a));
            }
        }
    }
}

TEST_CASE("superfluous product: y-ignoring policies have y-constant values") {
    Rng rng(47);
    const TabularMdp base = random_mdp(rng, 3, 2, 0.9);
    const int y_size = 2;
    const TabularMdp env = build_superfluous_product(base, y_size);
    for (int trial = 0; trial < 50; ++trial) {
        const Policy base_pi = sample_random_policy(
            rng, 3, 2,
            trial % 2 == 0 ? PolicyMode::Deterministic : PolicyMode::Stochastic);
        Mat probs(env.n_states, 2);
        for (int x = 0; x < 3; ++x) {
            for (int y = 0; y < y_size; ++y) {
                probs.row(FactoredState::flatten(x, y, y_size)) =
                    base_pi.probs.row(x);
            }
        }
        const Vec v = policy_evaluation(env, Policy(probs));
        for (int x = 0; x < 3; ++x) {
            CHECK(std::abs(v(FactoredState::flatten(x, 0, y_size)) -
                           v(FactoredState::flatten(x, 1, y_size))) < 1e-8);
        }
    }
}

TEST_CASE("m_{y0} model: value match, Bellman mismatch, distinct y0") {
    Rng rng(53);
    const TabularMdp base = random_mdp(rng, 3, 2, 0.9);
    const int y_size = 2;
    const TabularMdp env = build_superfluous_product(base, y_size);
    const TabularMdp m0 = build_y0_model(env, y_size, 0);
    const TabularMdp m1 = build_y0_model(env, y_size, 1);
    CHECK_THROWS_AS(build_y0_model(env, y_size, 2), std::invalid_argument);

    Mat probs(env.n_states, 2);
    for (int x = 0; x < 3; ++x) {
        for (int y = 0; y < y_size; ++y) {
            probs.row(FactoredState::flatten(x, y, y_size)) =
                Vec::Constant(2, 0.5).transpose();
        }
    }
    const Policy pi(probs);
    CHECK(sup_norm(policy_evaluation(env, pi) - policy_evaluation(m0, pi)) <
          1e-9);

    Vec indicator(env.n_states);
    for (int x = 0; x < 3; ++x) {
        for (int y = 0; y < y_size; ++y) {
            indicator(FactoredState::flatten(x, y, y_size)) = y != 0 ? 1.0 : 0.0;
        }
    }
    CHECK(sup_norm(bellman_operator(env, pi, indicator) -
                   bellman_operator(m0, pi, indicator)) > 1e-6);

    bool differ = false;
    for (int a = 0; a < 2; ++a) {
        if (m0.transition[a] != m1.transition[a]) differ = true;
    }
    CHECK(differ);
}

TEST_CASE("Prop. 5 pair: deterministic agreement, stochastic separation") {
    const auto [env, model] = build_det_stoch_counterexample();
    CHECK(env.reward == model.reward);
    for (int a1 = 0; a1 < 2; ++a1) {
        for (int a2 = 0; a2 < 2; ++a2) {
            for (int a3 = 0; a3 < 2; ++a3) {
                const Policy pi =
                    Policy::deterministic_from_actions({a1, a2, a3}, 2);
                CHECK(sup_norm(policy_evaluation(env, pi) -
                               policy_evaluation(model, pi)) < 1e-10);
            }
        }
    }
    const Policy uniform = Policy::uniform(3, 2);
    CHECK(sup_norm(policy_evaluation(env, uniform) -
                   policy_evaluation(model, uniform)) > 1e-8);
}

TEST_CASE("FactoredState flattening is a bijection") {
    for (int s = 0; s < 12; ++s) {
        const FactoredState fs = FactoredState::unflatten(s, 4);
        CHECK(FactoredState::flatten(fs.x, fs.y, 4) == s);
    }
}

TEST_CASE("all constructed MDPs validate") {
    Rng rng(59);
    const RingSpec spec = ring_spec(4, [](int i) { return double(i); }, 0.7);
    CHECK_NOTHROW(build_ring(spec).validate());
    CHECK_NOTHROW(build_false_ring(spec).validate());
    CHECK_NOTHROW(build_false_ring_infinite(spec).validate());
    const TabularMdp base = random_mdp(rng, 3, 2, 0.9);
    const TabularMdp env = build_superfluous_product(base, 2);
    CHECK_NOTHROW(env.validate());
    CHECK_NOTHROW(build_y0_model(env, 2, 1).validate());
    const auto [cex_env, cex_model] = build_det_stoch_counterexample();
    CHECK_NOTHROW(cex_env.validate());
    CHECK_NOTHROW(cex_model.validate());
}
