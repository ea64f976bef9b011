#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pvelab/experiments.hpp"

namespace {

std::string default_out_root() {
    if (const char* env = std::getenv("PVE_LAB_OUT")) return env;
    return "out";
}

pvelab::ExperimentConfig load_experiment_config(const std::string& config_path,
                                                const std::string& experiment,
                                                std::uint64_t seed,
                                                bool seed_given) {
    const pvelab::ConfigFile file = config_path.empty()
                                        ? pvelab::ConfigFile::parse("")
                                        : pvelab::ConfigFile::load(config_path);
    pvelab::ExperimentConfig config =
        pvelab::ExperimentConfig::from_file(file, experiment);
    if (seed_given) config.root_seed = seed;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tabular value-equivalent model learning harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    bool force = false;
    int workers = 1;
    app.add_option("--config", config_path, "configuration file (key = value)");
    CLI::Option* seed_opt = app.add_option("--seed", seed, "root random seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--force", force, "overwrite mismatched previous outputs");
    app.add_option("--workers", workers, "parallel training workers")
        ->check(CLI::PositiveNumber);

    CLI::App* model_space = app.add_subcommand(
        "model-space", "train model populations per order k; emit PCA data");
    CLI::App* capacity = app.add_subcommand(
        "capacity-sweep", "train rank-limited models per policy family");
    CLI::App* verify = app.add_subcommand(
        "verify", "run proposition fixtures and randomized bound suites");
    CLI::App* trajectories = app.add_subcommand(
        "trajectories", "roll out the optimal policy under env or model dynamics");
    for (CLI::App* sub : {model_space, capacity, verify, trajectories}) {
        sub->fallthrough();   // let --seed/--out/... appear after the subcommand
    }

    std::string suite = "all";
    int count = 200;
    verify->add_option("--suite", suite, "props | bounds | all");
    verify->add_option("--count", count, "randomized tuples per bound suite")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        std::string experiment;
        if (model_space->parsed()) experiment = "model-space";
        if (capacity->parsed()) experiment = "capacity-sweep";
        if (verify->parsed()) experiment = "verify";
        if (trajectories->parsed()) experiment = "trajectories";

        pvelab::RunOptions opts;
        opts.force = force;
        opts.workers = workers;
        opts.out_dir =
            out_dir.empty()
                ? (std::filesystem::path(default_out_root()) / experiment)
                      .string()
                : out_dir;

        if (verify->parsed()) {
            return pvelab::run_verify(suite, seed, count, opts);
        }
        pvelab::ExperimentConfig config = load_experiment_config(
            config_path, experiment, seed, seed_opt->count() > 0);
        if (model_space->parsed()) return pvelab::run_model_space(config, opts);
        if (capacity->parsed()) return pvelab::run_capacity_sweep(config, opts);
        return pvelab::run_trajectories(config, opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
