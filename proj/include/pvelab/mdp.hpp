#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvelab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Real-valued function over states (value functions and arbitrary v).
using StateFunction = Eigen::VectorXd;

/// Probability distribution over states.
using StateDistribution = Eigen::VectorXd;

constexpr double kStochasticTol = 1e-9;

/// Exact finite MDP: reward matrix [n_states x n_actions], one transition
/// matrix per action [n_states x n_states], discount in [0, 1).
struct TabularMdp {
    int n_states = 0;
    int n_actions = 0;
    Mat reward;                    // n_states x n_actions
    std::vector<Mat> transition;   // per action, rows are distributions over s'
    double discount = 0.0;

    TabularMdp() = default;
    TabularMdp(Mat reward_, std::vector<Mat> transition_, double discount_);

    /// Throws std::invalid_argument if any row is not a distribution or the
    /// discount is outside [0, 1).
    void validate() const;
};

/// Per-state distribution over actions.
struct Policy {
    Mat probs;   // n_states x n_actions, rows sum to 1

    Policy() = default;
    explicit Policy(Mat probs_);

    int n_states() const { return static_cast<int>(probs.rows()); }
    int n_actions() const { return static_cast<int>(probs.cols()); }

    /// True iff each row has exactly one entry equal to 1.
    bool deterministic() const;

    void validate() const;

    static Policy deterministic_from_actions(const std::vector<int>& actions,
                                             int n_actions);
    static Policy uniform(int n_states, int n_actions);
};

void check_distribution_rows(const Mat& m, const std::string& what);
void check_state_function(const StateFunction& v, int n_states,
                          const std::string& what);
void check_state_distribution(const StateDistribution& d,
                              const std::string& what);

}  // namespace pvelab
