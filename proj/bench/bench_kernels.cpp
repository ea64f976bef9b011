// Compares the vectorized production kernels against the naive serial
// reference implementations kept around for testing.

#include <benchmark/benchmark.h>

#include "pvelab/dp.hpp"
#include "pvelab/envs.hpp"
#include "pvelab/rng.hpp"
#include "pvelab/verify.hpp"

namespace {

struct Fixture {
    pvelab::TabularMdp env;
    pvelab::Policy policy;
    pvelab::Vec v;

    static Fixture four_rooms() {
        Fixture f{pvelab::build_four_rooms(0.2, 0.99),
                  pvelab::Policy(),
                  pvelab::Vec()};
        f.policy = pvelab::Policy::uniform(f.env.n_states, f.env.n_actions);
        pvelab::Rng rng(7);
        f.v = pvelab::Vec(f.env.n_states);
        for (int s = 0; s < f.env.n_states; ++s) f.v(s) = rng.uniform(-1, 1);
        return f;
    }
};

void BM_bellman_vectorized(benchmark::State& state) {
    const Fixture f = Fixture::four_rooms();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            pvelab::bellman_operator(f.env, f.policy, f.v));
    }
}
BENCHMARK(BM_bellman_vectorized);

void BM_bellman_serial(benchmark::State& state) {
    const Fixture f = Fixture::four_rooms();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            pvelab::serial::bellman_operator(f.env, f.policy, f.v));
    }
}
BENCHMARK(BM_bellman_serial);

void BM_k_step_vectorized(benchmark::State& state) {
    const Fixture f = Fixture::four_rooms();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            pvelab::k_step_bellman(f.env, f.policy, f.v, 10));
    }
}
BENCHMARK(BM_k_step_vectorized);

void BM_k_step_serial(benchmark::State& state) {
    const Fixture f = Fixture::four_rooms();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            pvelab::serial::k_step_bellman(f.env, f.policy, f.v, 10));
    }
}
BENCHMARK(BM_k_step_serial);

void BM_transition_op_vectorized(benchmark::State& state) {
    const Fixture f = Fixture::four_rooms();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            pvelab::transition_operator_k(f.env, f.policy, f.v, 5));
    }
}
BENCHMARK(BM_transition_op_vectorized);

void BM_transition_op_serial(benchmark::State& state) {
    const Fixture f = Fixture::four_rooms();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            pvelab::serial::transition_operator_k(f.env, f.policy, f.v, 5));
    }
}
BENCHMARK(BM_transition_op_serial);

}  // namespace

BENCHMARK_MAIN();
