#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pvelab/dp.hpp"
#include "pvelab/mdp.hpp"
#include "pvelab/rng.hpp"

namespace pvelab {

/// Flat vector view of a model: rewards row-major, then transitions
/// action-major/row-major.
struct ModelVector {
    Vec entries;
    std::string run_id;
    long snapshot_index = 0;
};

ModelVector vectorize_model(const TabularMdp& model);

/// Inverse of vectorize_model given the dimensions.
TabularMdp devectorize_model(const Vec& entries, int n_states, int n_actions,
                             double discount);

/// Centers by the mean and projects onto the top-dims right singular
/// directions. Component signs are fixed so the largest-magnitude loading is
/// positive.
std::vector<Vec> pca_project(const std::vector<ModelVector>& vectors,
                             int dims = 2);

/// Maximum pairwise Euclidean distance.
double diameter(const std::vector<Vec>& points);

/// Seeded rollouts under the given dynamics, as state-index sequences of
/// length horizon + 1 (including the start state).
std::vector<std::vector<int>> sample_trajectories(const TabularMdp& mdp,
                                                  const Policy& policy,
                                                  int n_traj, int horizon,
                                                  int start_state,
                                                  std::uint64_t seed);

}  // namespace pvelab
