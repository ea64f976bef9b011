#include "pvelab/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pvelab {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile config;
    std::istringstream stream(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw std::runtime_error("config line " + std::to_string(line_no) +
                                         ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": empty key");
        }
        const std::string full = section.empty() ? key : section + "." + key;
        config.values_[full] = value;
    }
    return config;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str());
}

bool ConfigFile::has(const std::string& key) const {
    return values_.count(key) != 0;
}

std::string ConfigFile::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        throw std::runtime_error("missing config key: " + key);
    }
    return it->second;
}

std::string ConfigFile::get_or(const std::string& key,
                               const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return std::stod(get(key));
}

long ConfigFile::get_long(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    return std::stol(get(key));
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::runtime_error("config key " + key + ": not a boolean: " + v);
}

std::vector<std::string> ConfigFile::get_list(const std::string& key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    std::istringstream stream(get(key));
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string ConfigFile::canonical_text() const {
    std::string out;
    for (const auto& [key, value] : values_) {
        out += key + " = " + value + "\n";
    }
    return out;
}

namespace {

std::vector<int> parse_k_list(const ConfigFile& file, const std::string& key,
                              std::vector<int> fallback) {
    if (!file.has(key)) return fallback;
    std::vector<int> out;
    for (const std::string& item : file.get_list(key)) {
        if (item == "inf" || item == "infinity") {
            out.push_back(kInfiniteOrder);
        } else {
            out.push_back(std::stoi(item));
        }
    }
    return out;
}

std::vector<int> parse_int_list(const ConfigFile& file, const std::string& key,
                                std::vector<int> fallback) {
    if (!file.has(key)) return fallback;
    std::vector<int> out;
    for (const std::string& item : file.get_list(key)) {
        out.push_back(std::stoi(item));
    }
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const ConfigFile& file,
                                             const std::string& experiment) {
    ExperimentConfig c;
    c.experiment = experiment;

    c.slip = file.get_double("env.slip", c.slip);
    c.discount = file.get_double("env.discount", c.discount);
    c.slip_includes_intended =
        file.get_bool("env.slip_includes_intended", c.slip_includes_intended);

    c.k_list = parse_k_list(file, "train.k_list", {1, 5, 10, kInfiniteOrder});
    c.model_count =
        static_cast<int>(file.get_long("train.model_count", c.model_count));
    c.rank_list = parse_int_list(file, "train.rank_list", {10, 104});
    c.iters = file.get_long("train.iters", c.iters);
    c.lr = file.get_double("train.lr", c.lr);
    c.batch_size = static_cast<int>(file.get_long("train.batch_size", c.batch_size));
    c.snapshot_every = file.get_long("train.snapshot_every", c.snapshot_every);
    c.adam_beta1 = file.get_double("train.adam_beta1", c.adam_beta1);
    c.adam_beta2 = file.get_double("train.adam_beta2", c.adam_beta2);
    c.adam_eps = file.get_double("train.adam_eps", c.adam_eps);

    c.dataset_size =
        static_cast<int>(file.get_long("dataset.size", c.dataset_size));
    c.noise_fraction = file.get_double("dataset.noise_fraction", c.noise_fraction);
    c.augment_per_policy = static_cast<int>(
        file.get_long("dataset.augment_per_policy", c.augment_per_policy));
    c.pi_policy_count = static_cast<int>(
        file.get_long("dataset.pi_policy_count", c.pi_policy_count));

    c.n_seeds = static_cast<int>(file.get_long("run.n_seeds", c.n_seeds));
    c.root_seed =
        static_cast<std::uint64_t>(file.get_long("run.root_seed", 0));
    c.out_dir = file.get_or("run.out_dir", c.out_dir);
    c.diameter_groups = static_cast<int>(
        file.get_long("run.diameter_groups", c.diameter_groups));

    c.n_traj = static_cast<int>(file.get_long("trajectories.n_traj", c.n_traj));
    c.horizon = static_cast<int>(file.get_long("trajectories.horizon", c.horizon));
    c.model_file = file.get_or("trajectories.model_file", c.model_file);
    c.start_state = file.get_or("trajectories.start_state", c.start_state);
    return c;
}

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace pvelab
