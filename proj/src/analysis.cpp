#include "pvelab/analysis.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace pvelab {

ModelVector vectorize_model(const TabularMdp& model) {
    ModelVector out;
    const long reward_size = static_cast<long>(model.reward.size());
    const long trans_size =
        static_cast<long>(model.n_actions) * model.n_states * model.n_states;
    out.entries.resize(reward_size + trans_size);
    long offset = 0;
    for (int s = 0; s < model.n_states; ++s) {
        for (int a = 0; a < model.n_actions; ++a) {
            out.entries(offset++) = model.reward(s, a);
        }
    }
    for (int a = 0; a < model.n_actions; ++a) {
        for (int s = 0; s < model.n_states; ++s) {
            for (int s2 = 0; s2 < model.n_states; ++s2) {
                out.entries(offset++) = model.transition[a](s, s2);
            }
        }
    }
    return out;
}

TabularMdp devectorize_model(const Vec& entries, int n_states, int n_actions,
                             double discount) {
    const long expected = static_cast<long>(n_states) * n_actions +
                          static_cast<long>(n_actions) * n_states * n_states;
    if (entries.size() != expected) {
        throw std::invalid_argument("devectorize_model: size mismatch");
    }
    Mat reward(n_states, n_actions);
    std::vector<Mat> transition(n_actions, Mat(n_states, n_states));
    long offset = 0;
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            reward(s, a) = entries(offset++);
        }
    }
    for (int a = 0; a < n_actions; ++a) {
        for (int s = 0; s < n_states; ++s) {
            for (int s2 = 0; s2 < n_states; ++s2) {
                transition[a](s, s2) = entries(offset++);
            }
        }
    }
    return TabularMdp(std::move(reward), std::move(transition), discount);
}

std::vector<Vec> pca_project(const std::vector<ModelVector>& vectors,
                             int dims) {
    if (static_cast<int>(vectors.size()) < dims) {
        throw std::invalid_argument("pca_project: need at least `dims` vectors");
    }
    const long rows = static_cast<long>(vectors.size());
    const long cols = vectors[0].entries.size();
    Mat data(rows, cols);
    for (long i = 0; i < rows; ++i) {
        if (vectors[i].entries.size() != cols) {
            throw std::invalid_argument("pca_project: inconsistent sizes");
        }
        data.row(i) = vectors[i].entries.transpose();
    }
    const Vec mean = data.colwise().mean();
    data.rowwise() -= mean.transpose();

    Eigen::JacobiSVD<Mat> svd(data, Eigen::ComputeThinV);
    const int available = static_cast<int>(svd.matrixV().cols());
    if (dims > available) dims = available;
    Mat components = svd.matrixV().leftCols(dims);
    // Fix each component's sign so the largest-magnitude loading is positive.
    for (int c = 0; c < dims; ++c) {
        Eigen::Index arg = 0;
        components.col(c).cwiseAbs().maxCoeff(&arg);
        if (components(arg, c) < 0.0) components.col(c) = -components.col(c);
    }
    Mat projected = data * components;
    std::vector<Vec> out(rows);
    for (long i = 0; i < rows; ++i) out[i] = projected.row(i).transpose();
    return out;
}

double diameter(const std::vector<Vec>& points) {
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            best = std::max(best, (points[i] - points[j]).norm());
        }
    }
    return best;
}

std::vector<std::vector<int>> sample_trajectories(const TabularMdp& mdp,
                                                  const Policy& policy,
                                                  int n_traj, int horizon,
                                                  int start_state,
                                                  std::uint64_t seed) {
    if (start_state < 0 || start_state >= mdp.n_states) {
        throw std::invalid_argument("sample_trajectories: bad start state");
    }
    if (n_traj < 1 || horizon < 0) {
        throw std::invalid_argument("sample_trajectories: bad n_traj/horizon");
    }
    auto sample_row = [](Rng& rng, const auto& row) {
        const double u = rng.next_double();
        double cum = 0.0;
        int last = 0;
        for (Eigen::Index j = 0; j < row.size(); ++j) {
            if (row(j) <= 0.0) continue;
            cum += row(j);
            last = static_cast<int>(j);
            if (u < cum) return last;
        }
        return last;   // guard against rounding in the cumulative sum
    };

    std::vector<std::vector<int>> trajectories(n_traj);
    for (int t = 0; t < n_traj; ++t) {
        Rng rng(derive_seed(seed, "traj", t));
        std::vector<int>& path = trajectories[t];
        path.reserve(horizon + 1);
        int s = start_state;
        path.push_back(s);
        for (int step = 0; step < horizon; ++step) {
            const int a = sample_row(rng, policy.probs.row(s));
            s = sample_row(rng, mdp.transition[a].row(s));
            path.push_back(s);
        }
    }
    return trajectories;
}

}  // namespace pvelab
