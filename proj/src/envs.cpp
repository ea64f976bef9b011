#include "pvelab/envs.hpp"

#include <array>
#include <cmath>

#include "pvelab/dp.hpp"

namespace pvelab {

namespace {

// 11x11 interior of the classic Four Rooms grid; 'X' is a wall, 104 open cells.
constexpr std::array<const char*, 11> kFourRoomsGrid = {
    "     X     ",
    "     X     ",
    "           ",
    "     X     ",
    "     X     ",
    "X XXXX     ",
    "     XXX XX",
    "     X     ",
    "     X     ",
    "           ",
    "     X     ",
};

FourRoomsLayout make_layout() {
    FourRoomsLayout layout;
    layout.state_of_cell.assign(layout.width * layout.height, -1);
    for (int row = 0; row < layout.height; ++row) {
        for (int col = 0; col < layout.width; ++col) {
            if (kFourRoomsGrid[row][col] == ' ') {
                const int cell = row * layout.width + col;
                layout.state_of_cell[cell] = static_cast<int>(layout.cell_of_state.size());
                layout.cell_of_state.push_back(cell);
            }
        }
    }
    layout.goal_state = layout.state_of_cell[0 * layout.width + (layout.width - 1)];
    layout.bottom_right_state =
        layout.state_of_cell[(layout.height - 1) * layout.width + (layout.width - 1)];
    return layout;
}

}  // namespace

const FourRoomsLayout& four_rooms_layout() {
    static const FourRoomsLayout layout = make_layout();
    return layout;
}

bool FourRoomsLayout::adjacent_or_same(int s, int s2) const {
    const int c1 = cell_of_state.at(s);
    const int c2 = cell_of_state.at(s2);
    const int dr = std::abs(c1 / width - c2 / width);
    const int dc = std::abs(c1 % width - c2 % width);
    return dr + dc <= 1;
}

TabularMdp build_four_rooms(double slip, double discount,
                            bool slip_includes_intended) {
    if (slip < 0.0 || slip > 1.0) {
        throw std::invalid_argument("build_four_rooms: slip outside [0, 1]");
    }
    const FourRoomsLayout& layout = four_rooms_layout();
    const int n = static_cast<int>(layout.cell_of_state.size());
    const int n_actions = 4;
    // N, E, S, W
    constexpr int drow[4] = {-1, 0, 1, 0};
    constexpr int dcol[4] = {0, 1, 0, -1};

    auto move_result = [&](int s, int dir) {
        const int cell = layout.cell_of_state[s];
        const int row = cell / layout.width + drow[dir];
        const int col = cell % layout.width + dcol[dir];
        if (row < 0 || row >= layout.height || col < 0 || col >= layout.width) {
            return s;   // outer wall
        }
        const int target = layout.state_of_cell[row * layout.width + col];
        return target < 0 ? s : target;
    };

    std::vector<Mat> transition(n_actions, Mat::Zero(n, n));
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            if (slip_includes_intended) {
                transition[a](s, move_result(s, a)) += 1.0 - slip;
                for (int dir = 0; dir < 4; ++dir) {
                    transition[a](s, move_result(s, dir)) += slip / 4.0;
                }
            } else {
                transition[a](s, move_result(s, a)) += 1.0 - slip;
                for (int dir = 0; dir < 4; ++dir) {
                    if (dir == a) continue;
                    transition[a](s, move_result(s, dir)) += slip / 3.0;
                }
            }
        }
    }
    Mat reward(n, n_actions);
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            reward(s, a) = transition[a](s, layout.goal_state);
        }
    }
    return TabularMdp(std::move(reward), std::move(transition), discount);
}

TabularMdp build_ring(const RingSpec& spec) {
    if (spec.n < 1) {
        throw std::invalid_argument("build_ring: n must be >= 1");
    }
    const int n = spec.n;
    Mat reward(n, 1);
    Mat p = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        reward(i, 0) = spec.g(i + 1);
        p(i, (i + 1) % n) = 1.0;
    }
    return TabularMdp(std::move(reward), {std::move(p)}, spec.discount);
}

TabularMdp build_false_ring(const RingSpec& spec) {
    if (spec.discount <= 0.0 || spec.discount >= 1.0) {
        throw std::invalid_argument("build_false_ring: discount must lie in (0, 1)");
    }
    const int n = spec.n;
    const double gamma = spec.discount;
    double denom = 0.0;
    for (int t = 0; t < n; ++t) denom += std::pow(gamma, t);
    Mat reward(n, 1);
    Mat p = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double n_step_return = 0.0;
        for (int t = 0; t < n; ++t) {
            n_step_return += std::pow(gamma, t) * spec.g((i + t) % n + 1);
        }
        reward(i, 0) = n_step_return / denom;
        p(i, i) = 1.0;
    }
    return TabularMdp(std::move(reward), {std::move(p)}, gamma);
}

TabularMdp build_false_ring_infinite(const RingSpec& spec) {
    const TabularMdp ring = build_ring(spec);
    const Policy only_action = Policy::uniform(spec.n, 1);
    const Vec v_pi = policy_evaluation(ring, only_action);
    Mat reward(spec.n, 1);
    Mat p = Mat::Zero(spec.n, spec.n);
    for (int i = 0; i < spec.n; ++i) {
        reward(i, 0) = (1.0 - spec.discount) * v_pi(i);
        p(i, i) = 1.0;
    }
    return TabularMdp(std::move(reward), {std::move(p)}, spec.discount);
}

TabularMdp build_superfluous_product(const TabularMdp& base, int y_size,
                                     const Mat& y_dynamics) {
    if (y_size < 2) {
        throw std::invalid_argument("build_superfluous_product: |Y| > 1 required");
    }
    Mat q = y_dynamics;
    if (q.size() == 0) {
        q = Mat::Constant(y_size, y_size, 1.0 / y_size);
    }
    if (q.rows() != y_size || q.cols() != y_size) {
        throw std::invalid_argument("build_superfluous_product: bad y_dynamics shape");
    }
    check_distribution_rows(q, "y_dynamics");

    const int nx = base.n_states;
    const int n = nx * y_size;
    Mat reward(n, base.n_actions);
    std::vector<Mat> transition(base.n_actions, Mat::Zero(n, n));
    for (int x = 0; x < nx; ++x) {
        for (int y = 0; y < y_size; ++y) {
            const int s = FactoredState::flatten(x, y, y_size);
            for (int a = 0; a < base.n_actions; ++a) {
                reward(s, a) = base.reward(x, a);
                for (int x2 = 0; x2 < nx; ++x2) {
                    for (int y2 = 0; y2 < y_size; ++y2) {
                        transition[a](s, FactoredState::flatten(x2, y2, y_size)) =
                            base.transition[a](x, x2) * q(y, y2);
                    }
                }
            }
        }
    }
    return TabularMdp(std::move(reward), std::move(transition), base.discount);
}

TabularMdp build_y0_model(const TabularMdp& env, int y_size, int y0) {
    if (y0 < 0 || y0 >= y_size) {
        throw std::invalid_argument("build_y0_model: y0 out of range");
    }
    if (env.n_states % y_size != 0) {
        throw std::invalid_argument("build_y0_model: env is not a Y-product");
    }
    const int nx = env.n_states / y_size;
    std::vector<Mat> transition(env.n_actions, Mat::Zero(env.n_states, env.n_states));
    for (int s = 0; s < env.n_states; ++s) {
        for (int a = 0; a < env.n_actions; ++a) {
            for (int x2 = 0; x2 < nx; ++x2) {
                double x_marginal = 0.0;
                for (int y2 = 0; y2 < y_size; ++y2) {
                    x_marginal += env.transition[a](s, FactoredState::flatten(x2, y2, y_size));
                }
                transition[a](s, FactoredState::flatten(x2, y0, y_size)) = x_marginal;
            }
        }
    }
    return TabularMdp(env.reward, std::move(transition), env.discount);
}

std::pair<TabularMdp, TabularMdp> build_det_stoch_counterexample(
    double discount) {
    // Three states {s1, s2, s3}, two actions {L, R}. Reward only on (s1, L).
    // Under action R from s2 the pair disagrees; everything else matches.
    const int n = 3;
    Mat reward = Mat::Zero(n, 2);
    reward(0, 0) = 1.0;

    Mat left = Mat::Zero(n, n);
    left(0, 0) = 1.0;   // s1 -L-> s1
    left(1, 0) = 1.0;   // s2 -L-> s1
    left(2, 1) = 1.0;   // s3 -L-> s2

    Mat right_env = Mat::Zero(n, n);
    right_env(0, 1) = 1.0;   // s1 -R-> s2
    right_env(1, 2) = 1.0;   // s2 -R-> s3
    right_env(2, 2) = 1.0;   // s3 -R-> s3

    TabularMdp env(reward, {left, right_env}, discount);

    auto deterministic_values_match = [&](const TabularMdp& model) {
        for (int a1 = 0; a1 < 2; ++a1) {
            for (int a2 = 0; a2 < 2; ++a2) {
                for (int a3 = 0; a3 < 2; ++a3) {
                    const Policy pi =
                        Policy::deterministic_from_actions({a1, a2, a3}, 2);
                    const Vec gap = policy_evaluation(env, pi) -
                                    policy_evaluation(model, pi);
                    if (gap.lpNorm<Eigen::Infinity>() >= 1e-10) return false;
                }
            }
        }
        return true;
    };

    // Small family of candidate model rows for R-from-s2; certify each
    // candidate by brute force instead of hard-coding one.
    const std::vector<std::array<double, 3>> candidates = {
        {0.0, 1.0, 0.0}, {0.0, 0.75, 0.25}, {0.0, 0.5, 0.5}};
    for (const auto& row : candidates) {
        Mat right_model = right_env;
        for (int s2 = 0; s2 < n; ++s2) right_model(1, s2) = row[s2];
        TabularMdp model(reward, {left, right_model}, discount);
        if (!deterministic_values_match(model)) continue;
        const Policy uniform = Policy::uniform(n, 2);
        const Vec gap = policy_evaluation(env, uniform) -
                        policy_evaluation(model, uniform);
        if (gap.lpNorm<Eigen::Infinity>() > 1e-8) {
            return {env, model};
        }
    }
    throw std::runtime_error(
        "build_det_stoch_counterexample: no candidate satisfied the "
        "postconditions");
}

}  // namespace pvelab
