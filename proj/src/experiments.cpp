#include "pvelab/experiments.hpp"

#include <filesystem>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>

#include "pvelab/analysis.hpp"
#include "pvelab/envs.hpp"
#include "pvelab/io.hpp"
#include "pvelab/optim.hpp"
#include "pvelab/verify.hpp"

namespace pvelab {

namespace {

std::string k_label(int k) {
    return k == kInfiniteOrder ? "inf" : std::to_string(k);
}

/// Canonical text of the fields a command depends on, for the manifest hash.
std::string config_text(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "experiment = " << c.experiment << "\n"
        << "slip = " << format_real(c.slip) << "\n"
        << "discount = " << format_real(c.discount) << "\n"
        << "slip_includes_intended = " << c.slip_includes_intended << "\n"
        << "k_list =";
    for (int k : c.k_list) out << ' ' << k_label(k);
    out << "\n"
        << "model_count = " << c.model_count << "\n"
        << "rank_list =";
    for (int r : c.rank_list) out << ' ' << r;
    out << "\n"
        << "iters = " << c.iters << "\n"
        << "lr = " << format_real(c.lr) << "\n"
        << "batch_size = " << c.batch_size << "\n"
        << "snapshot_every = " << c.snapshot_every << "\n"
        << "adam = " << format_real(c.adam_beta1) << ' '
        << format_real(c.adam_beta2) << ' ' << format_real(c.adam_eps) << "\n"
        << "dataset_size = " << c.dataset_size << "\n"
        << "noise_fraction = " << format_real(c.noise_fraction) << "\n"
        << "augment_per_policy = " << c.augment_per_policy << "\n"
        << "n_seeds = " << c.n_seeds << "\n"
        << "root_seed = " << c.root_seed << "\n"
        << "n_traj = " << c.n_traj << "\n"
        << "horizon = " << c.horizon << "\n"
        << "model_file = " << c.model_file << "\n"
        << "start_state = " << c.start_state << "\n";
    return out.str();
}

bool claim_output_dir(const std::string& dir, const std::string& text,
                      std::uint64_t seed, bool force, const std::string& note) {
    if (!manifest_allows(dir, text, seed, force)) {
        std::cerr << "error: " << dir
                  << " holds results for a different config/seed; "
                     "pass --force to overwrite\n";
        return false;
    }
    write_manifest(dir, text, seed, note);
    return true;
}

TrainConfig make_train_config(const ExperimentConfig& c, int k, int rank,
                              std::uint64_t seed) {
    TrainConfig t;
    t.loss_kind = k == kInfiniteOrder ? LossKind::Pve : LossKind::OrderKVe;
    t.k = k == kInfiniteOrder ? 1 : k;
    t.rank = rank;
    t.iters = c.iters;
    t.lr = c.lr;
    t.batch_size = c.batch_size;
    t.snapshot_every = c.snapshot_every;
    t.seed = seed;
    t.adam.beta1 = c.adam_beta1;
    t.adam.beta2 = c.adam_beta2;
    t.adam.eps = c.adam_eps;
    return t;
}

/// Exact (Howard) policy iteration; much cheaper than value iteration at
/// gamma = 0.99 and used wherever many optima are needed.
struct Optimum {
    Policy policy;
    Vec values;
};

Optimum solve_optimal(const TabularMdp& mdp) {
    Policy current = Policy::uniform(mdp.n_states, mdp.n_actions);
    Vec values = policy_evaluation(mdp, current);
    for (int iter = 0; iter < 1000; ++iter) {
        Policy improved = greedy_policy(mdp, values);
        const Vec improved_values = policy_evaluation(mdp, improved);
        const bool stable = iter > 0 && improved.probs == current.probs;
        current = std::move(improved);
        values = improved_values;
        if (stable) return {current, values};
    }
    throw std::runtime_error("solve_optimal: policy iteration did not settle");
}

/// Mean environment value of the model's optimal policy, over the mean
/// environment-optimal value.
double opt_value_ratio(const TabularMdp& env, const TabularMdp& model,
                       double env_opt_mean) {
    const Optimum model_opt = solve_optimal(model);
    const Vec in_env = policy_evaluation(env, model_opt.policy);
    return in_env.mean() / env_opt_mean;
}

/// Runs `jobs` closures with at most `workers` in flight; results land in
/// submission order so downstream output is deterministic.
template <typename Job>
void run_jobs(const std::vector<Job>& jobs, int workers) {
    if (workers <= 1) {
        for (const Job& job : jobs) job();
        return;
    }
    std::size_t next = 0;
    while (next < jobs.size()) {
        std::vector<std::future<void>> inflight;
        for (int w = 0; w < workers && next < jobs.size(); ++w, ++next) {
            inflight.push_back(
                std::async(std::launch::async, [&jobs, i = next] { jobs[i](); }));
        }
        for (auto& f : inflight) f.get();
    }
}

}  // namespace

int run_model_space(const ExperimentConfig& config, const RunOptions& opts) {
    const std::string note =
        "diameter groups: " + std::to_string(config.diameter_groups) +
        " sets at desk scale (reference protocol: 4 sets of 30)";
    if (!claim_output_dir(opts.out_dir, config_text(config), config.root_seed,
                          opts.force, note)) {
        return 2;
    }
    const TabularMdp env = build_four_rooms(config.slip, config.discount,
                                            config.slip_includes_intended);
    DatasetSpec dataset_spec;
    dataset_spec.kind = DatasetSpec::Kind::RandomMixed;
    dataset_spec.count = config.dataset_size;
    dataset_spec.seed = derive_seed(config.root_seed, "dataset", 0);
    const PolicyValueDataset dataset = build_dataset(env, dataset_spec);
    // The PVE loss needs exact values; reuse the same policy population with
    // value labels instead of random functions for the k = infinity class.
    PolicyValueDataset pve_dataset;
    for (int k : config.k_list) {
        if (k == kInfiniteOrder) {
            pve_dataset = label_with_values(env, dataset.policies);
            break;
        }
    }
    const double env_opt_mean = solve_optimal(env).values.mean();

    CsvWriter points(
        (std::filesystem::path(opts.out_dir) / "points.csv").string(),
        "run_id,k,snapshot,model_id,pc1,pc2,loss,opt_value_ratio");
    CsvWriter diameters(
        (std::filesystem::path(opts.out_dir) / "diameters.csv").string(),
        "k,snapshot,diameter_2d,diameter_raw");

    for (std::size_t ki = 0; ki < config.k_list.size(); ++ki) {
        const int k = config.k_list[ki];
        const std::string label = k_label(k);

        // All runs of one k share the snapshot schedule; store each model's
        // vectorized snapshots for the per-snapshot PCA over the population.
        std::vector<TrainResult> results(config.model_count);
        std::vector<std::function<void()>> jobs;
        for (int m = 0; m < config.model_count; ++m) {
            jobs.push_back([&, m, ki] {
                const TrainConfig train_config = make_train_config(
                    config, config.k_list[ki], ModelParams::kFullRank,
                    derive_seed(config.root_seed, "model-space-" + label, m));
                results[m] = train(
                    env, train_config,
                    config.k_list[ki] == kInfiniteOrder ? pve_dataset : dataset);
            });
        }
        run_jobs(jobs, opts.workers);

        const std::size_t n_snapshots = results[0].snapshot_iters.size();
        for (std::size_t snap = 0; snap < n_snapshots; ++snap) {
            std::vector<ModelVector> vectors;
            std::vector<TabularMdp> models;
            for (int m = 0; m < config.model_count; ++m) {
                models.push_back(realize_model(results[m].snapshots[snap]));
                ModelVector vec = vectorize_model(models.back());
                vec.run_id = "k" + label + "-m" + std::to_string(m);
                vec.snapshot_index = results[m].snapshot_iters[snap];
                vectors.push_back(std::move(vec));
            }
            const std::vector<Vec> projected = pca_project(vectors, 2);
            for (int m = 0; m < config.model_count; ++m) {
                points.row({vectors[m].run_id, label,
                            std::to_string(vectors[m].snapshot_index),
                            std::to_string(m), CsvWriter::real(projected[m](0)),
                            CsvWriter::real(projected[m](1)),
                            CsvWriter::real(results[m].snapshot_losses[snap]),
                            CsvWriter::real(opt_value_ratio(env, models[m],
                                                            env_opt_mean))});
            }
            std::vector<Vec> raw;
            for (const ModelVector& vec : vectors) raw.push_back(vec.entries);
            diameters.row({label,
                           std::to_string(results[0].snapshot_iters[snap]),
                           CsvWriter::real(diameter(projected)),
                           CsvWriter::real(diameter(raw))});
        }
    }
    points.flush();
    diameters.flush();
    return 0;
}

int run_capacity_sweep(const ExperimentConfig& config, const RunOptions& opts) {
    if (!claim_output_dir(opts.out_dir, config_text(config), config.root_seed,
                          opts.force, "")) {
        return 2;
    }
    const TabularMdp env = build_four_rooms(config.slip, config.discount,
                                            config.slip_includes_intended);
    const double env_opt_mean = solve_optimal(env).values.mean();

    CsvWriter csv((std::filesystem::path(opts.out_dir) / "capacity.csv").string(),
                  "rank,family,seed,opt_value_mean,env_opt_value");

    const std::vector<std::pair<std::string, DatasetSpec::Kind>> families = {
        {"det", DatasetSpec::Kind::PiDerivedDeterministic},
        {"stoch", DatasetSpec::Kind::PiDerivedStochastic}};

    // Datasets are shared across ranks within a (family, seed) cell so rank is
    // the only variable along each curve.
    for (const auto& [family, kind] : families) {
        for (int s = 0; s < config.n_seeds; ++s) {
            DatasetSpec dataset_spec;
            dataset_spec.kind = kind;
            dataset_spec.count = config.dataset_size;
            dataset_spec.noise_fraction = config.noise_fraction;
            dataset_spec.augment_per_policy = config.augment_per_policy;
            dataset_spec.seed =
                derive_seed(config.root_seed, "capacity-dataset-" + family, s);
            const PolicyValueDataset dataset = build_dataset(env, dataset_spec);

            std::vector<double> ratios(config.rank_list.size());
            std::vector<std::function<void()>> jobs;
            for (std::size_t ri = 0; ri < config.rank_list.size(); ++ri) {
                jobs.push_back([&, ri, s] {
                    const TrainConfig train_config = make_train_config(
                        config, kInfiniteOrder, config.rank_list[ri],
                        derive_seed(config.root_seed,
                                    "capacity-" + family + "-rank" +
                                        std::to_string(config.rank_list[ri]),
                                    s));
                    const TrainResult result = train(env, train_config, dataset);
                    const TabularMdp model =
                        realize_model(result.snapshots.back());
                    const Optimum model_opt = solve_optimal(model);
                    ratios[ri] =
                        policy_evaluation(env, model_opt.policy).mean();
                });
            }
            run_jobs(jobs, opts.workers);
            for (std::size_t ri = 0; ri < config.rank_list.size(); ++ri) {
                csv.row({std::to_string(config.rank_list[ri]), family,
                         std::to_string(s), CsvWriter::real(ratios[ri]),
                         CsvWriter::real(env_opt_mean)});
            }
        }
    }
    csv.flush();
    return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed, int count,
               const RunOptions& opts) {
    if (suite != "props" && suite != "bounds" && suite != "all") {
        std::cerr << "error: unknown suite '" << suite
                  << "' (expected props | bounds | all)\n";
        return 2;
    }
    const std::string text = "experiment = verify\nsuite = " + suite +
                             "\ncount = " + std::to_string(count) + "\n";
    if (!claim_output_dir(opts.out_dir, text, seed, opts.force, "")) {
        return 2;
    }
    std::vector<CheckResult> results;
    if (suite == "props" || suite == "all") {
        for (CheckResult& r : run_proposition_fixtures(seed)) {
            results.push_back(std::move(r));
        }
    }
    if (suite == "bounds" || suite == "all") {
        for (CheckResult& r : run_bound_suites(seed, count)) {
            results.push_back(std::move(r));
        }
    }

    CsvWriter csv((std::filesystem::path(opts.out_dir) / "verify.csv").string(),
                  "suite,seed,case,lhs,rhs,g,a,b,satisfied");
    int failures = 0;
    for (const CheckResult& r : results) {
        auto component = [&r](const char* name) {
            const auto it = r.components.find(name);
            return it == r.components.end() ? std::string()
                                            : CsvWriter::real(it->second);
        };
        csv.row({r.suite, std::to_string(r.seed), r.name,
                 CsvWriter::real(r.lhs), CsvWriter::real(r.rhs), component("g"),
                 component("a"), component("b"), r.passed ? "1" : "0"});
        if (!r.passed) {
            ++failures;
            std::cerr << "FAIL " << r.suite << "/" << r.name
                      << " lhs=" << r.lhs << " rhs=" << r.rhs
                      << " seed=" << r.seed << "\n";
        }
    }
    csv.flush();
    std::cout << results.size() - failures << "/" << results.size()
              << " checks passed\n";
    return failures == 0 ? 0 : 1;
}

int run_trajectories(const ExperimentConfig& config, const RunOptions& opts) {
    if (!claim_output_dir(opts.out_dir, config_text(config), config.root_seed,
                          opts.force, "")) {
        return 2;
    }
    const TabularMdp env = build_four_rooms(config.slip, config.discount,
                                            config.slip_includes_intended);
    const TabularMdp dynamics =
        config.model_file.empty() ? env : load_model(config.model_file);
    if (dynamics.n_states != env.n_states ||
        dynamics.n_actions != env.n_actions) {
        std::cerr << "error: model file shape does not match Four Rooms\n";
        return 2;
    }

    const FourRoomsLayout& layout = four_rooms_layout();
    int start = -1;
    if (config.start_state == "bottom-right") {
        start = layout.bottom_right_state;
    } else if (config.start_state == "bottom-left") {
        start = layout.state_of_cell[(layout.height - 1) * layout.width];
    } else {
        start = std::stoi(config.start_state);
    }

    // The rollout policy is always the environment-optimal one; only the
    // dynamics differ between an environment run and a model run.
    const Optimum env_opt = solve_optimal(env);
    const auto trajectories = sample_trajectories(
        dynamics, env_opt.policy, config.n_traj, config.horizon, start,
        derive_seed(config.root_seed, "trajectories", 0));

    CsvWriter csv(
        (std::filesystem::path(opts.out_dir) / "trajectories.csv").string(),
        "traj_id,t,state");
    long violations = 0;
    for (std::size_t id = 0; id < trajectories.size(); ++id) {
        const std::vector<int>& path = trajectories[id];
        for (std::size_t t = 0; t < path.size(); ++t) {
            csv.row({std::to_string(id), std::to_string(t),
                     std::to_string(path[t])});
            if (t > 0 && !layout.adjacent_or_same(path[t - 1], path[t])) {
                ++violations;
            }
        }
    }
    csv.flush();
    std::cout << "non-adjacent transitions: " << violations << "\n";
    return 0;
}

}  // namespace pvelab
