#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pvelab/dataset.hpp"

namespace pvelab {

/// Flat `key = value` configuration with `[section]` headers. Keys are stored
/// as "section.key"; '#' starts a comment.
class ConfigFile {
  public:
    static ConfigFile parse(const std::string& text);
    static ConfigFile load(const std::string& path);

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key) const;  // comma-split

    /// Sorted key = value dump used for hashing and the manifest.
    std::string canonical_text() const;

  private:
    std::map<std::string, std::string> values_;
};

constexpr int kInfiniteOrder = -1;   // "inf" in config k lists

struct ExperimentConfig {
    std::string experiment;   // model-space | capacity-sweep | trajectories

    // environment
    double slip = 0.2;
    double discount = 0.99;
    bool slip_includes_intended = true;

    // training
    std::vector<int> k_list;          // kInfiniteOrder means PVE
    int model_count = 12;
    std::vector<int> rank_list;
    long iters = 50000;
    double lr = 1e-3;
    int batch_size = 50;
    long snapshot_every = 1000;
    double adam_beta1 = 0.99;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;

    // dataset
    int dataset_size = 2000;
    double noise_fraction = 0.1;
    int augment_per_policy = 100;
    int pi_policy_count = 0;          // capacity sweep: bases before augmenting

    int n_seeds = 3;
    std::uint64_t root_seed = 0;
    std::string out_dir;

    int diameter_groups = 3;          // desk-scale stand-in for 4 sets of 30

    // trajectories
    int n_traj = 5000;
    int horizon = 30;
    std::string model_file;           // empty = run on the environment
    std::string start_state = "bottom-right";

    static ExperimentConfig from_file(const ConfigFile& file,
                                      const std::string& experiment);
};

std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace pvelab
