#include "pvelab/mdp.hpp"

#include <cmath>

namespace pvelab {

void check_distribution_rows(const Mat& m, const std::string& what) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double p = m(i, j);
            if (!std::isfinite(p) || p < 0.0) {
                throw std::invalid_argument(what + ": negative or non-finite entry in row " +
                                            std::to_string(i));
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kStochasticTol) {
            throw std::invalid_argument(what + ": row " + std::to_string(i) +
                                        " sums to " + std::to_string(sum));
        }
    }
}

void check_state_function(const StateFunction& v, int n_states,
                          const std::string& what) {
    if (v.size() != n_states) {
        throw std::invalid_argument(what + ": expected " + std::to_string(n_states) +
                                    " states, got " + std::to_string(v.size()));
    }
    if (!v.allFinite()) {
        throw std::invalid_argument(what + ": non-finite entry");
    }
}

void check_state_distribution(const StateDistribution& d,
                              const std::string& what) {
    check_distribution_rows(d.transpose(), what);
}

TabularMdp::TabularMdp(Mat reward_, std::vector<Mat> transition_,
                       double discount_)
    : n_states(static_cast<int>(reward_.rows())),
      n_actions(static_cast<int>(reward_.cols())),
      reward(std::move(reward_)),
      transition(std::move(transition_)),
      discount(discount_) {
    validate();
}

void TabularMdp::validate() const {
    if (n_states <= 0 || n_actions <= 0) {
        throw std::invalid_argument("TabularMdp: empty state or action space");
    }
    if (discount < 0.0 || discount >= 1.0) {
        throw std::invalid_argument("TabularMdp: discount must lie in [0, 1)");
    }
    if (reward.rows() != n_states || reward.cols() != n_actions ||
        !reward.allFinite()) {
        throw std::invalid_argument("TabularMdp: bad reward matrix");
    }
    if (static_cast<int>(transition.size()) != n_actions) {
        throw std::invalid_argument("TabularMdp: one transition matrix per action required");
    }
    for (int a = 0; a < n_actions; ++a) {
        if (transition[a].rows() != n_states || transition[a].cols() != n_states) {
            throw std::invalid_argument("TabularMdp: bad transition shape for action " +
                                        std::to_string(a));
        }
        check_distribution_rows(transition[a], "TabularMdp transition[" +
                                                   std::to_string(a) + "]");
    }
}

Policy::Policy(Mat probs_) : probs(std::move(probs_)) { validate(); }

void Policy::validate() const {
    if (probs.rows() == 0 || probs.cols() == 0) {
        throw std::invalid_argument("Policy: empty");
    }
    check_distribution_rows(probs, "Policy");
}

bool Policy::deterministic() const {
    for (Eigen::Index s = 0; s < probs.rows(); ++s) {
        int ones = 0;
        for (Eigen::Index a = 0; a < probs.cols(); ++a) {
            if (probs(s, a) == 1.0) ++ones;
        }
        if (ones != 1) return false;
    }
    return true;
}

Policy Policy::deterministic_from_actions(const std::vector<int>& actions,
                                          int n_actions) {
    Mat probs = Mat::Zero(static_cast<Eigen::Index>(actions.size()), n_actions);
    for (std::size_t s = 0; s < actions.size(); ++s) {
        probs(static_cast<Eigen::Index>(s), actions[s]) = 1.0;
    }
    return Policy(std::move(probs));
}

Policy Policy::uniform(int n_states, int n_actions) {
    return Policy(Mat::Constant(n_states, n_actions, 1.0 / n_actions));
}

}  // namespace pvelab
