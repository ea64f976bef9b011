#pragma once

#include <functional>
#include <utility>

#include "pvelab/mdp.hpp"

namespace pvelab {

/// n-state single-action cycle with reward g(i) on leaving state i
/// (states are 1-indexed in g, matching the usual presentation).
struct RingSpec {
    int n = 1;
    std::function<double(int)> g;   // i in [1, n]
    double discount = 0.5;
};

/// Index arithmetic for product state spaces S = X x Y (x-major flattening).
struct FactoredState {
    int x = 0;
    int y = 0;

    static int flatten(int x, int y, int y_size) { return x * y_size + y; }
    static FactoredState unflatten(int s, int y_size) {
        return {s / y_size, s % y_size};
    }
};

/// 104-state, 4-action Four Rooms gridworld. With probability (1 - slip) the
/// agent moves in the intended direction, otherwise in a uniformly random
/// cardinal direction (which includes the intended one when
/// slip_includes_intended is set). Wall moves keep the agent in place.
/// Transitions into the upper-right goal cell yield reward 1.
TabularMdp build_four_rooms(double slip, double discount,
                            bool slip_includes_intended = true);

/// Grid metadata for the Four Rooms build, used to reason about adjacency.
struct FourRoomsLayout {
    int width = 11;
    int height = 11;
    std::vector<int> cell_of_state;         // state -> row * width + col
    std::vector<int> state_of_cell;         // row * width + col -> state or -1
    int goal_state = -1;
    int bottom_right_state = -1;

    bool adjacent_or_same(int s, int s2) const;
};
const FourRoomsLayout& four_rooms_layout();

TabularMdp build_ring(const RingSpec& spec);

/// Same state space as the ring; every state self-transitions with reward
/// equal to the ring's discounted n-step return divided by sum_{t<n} gamma^t.
TabularMdp build_false_ring(const RingSpec& spec);

/// Normalization r~(s) = (1 - gamma) v_pi(s), the n -> infinity analog.
TabularMdp build_false_ring_infinite(const RingSpec& spec);

/// Product MDP over X x Y where reward and the x-marginal of transitions
/// depend only on (x, a) and the y-successor follows y_dynamics
/// (row-stochastic [y_size x y_size]; uniform if empty).
TabularMdp build_superfluous_product(const TabularMdp& base, int y_size,
                                     const Mat& y_dynamics = Mat());

/// Model with the product's rewards whose transitions force y' = y0 while
/// preserving the x-marginal.
TabularMdp build_y0_model(const TabularMdp& env, int y_size, int y0);

/// 3-state, 2-action environment/model pair differing only in the transition
/// row for action R from s2, with identical values for all 8 deterministic
/// policies but different values for the uniform-random policy. Certified by
/// brute force at build time.
std::pair<TabularMdp, TabularMdp> build_det_stoch_counterexample(
    double discount = 0.9);

}  // namespace pvelab
