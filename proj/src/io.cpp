#include "pvelab/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pvelab/analysis.hpp"
#include "pvelab/config.hpp"

namespace pvelab {

std::string format_real(double x) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    return buffer;
}

void save_model(const std::string& path, const TabularMdp& model, int rank) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write model file: " + path);
    }
    out << "pvelab-model 1 " << model.n_states << ' ' << model.n_actions << ' '
        << rank << ' ' << format_real(model.discount) << '\n';
    const ModelVector vec = vectorize_model(model);
    for (Eigen::Index i = 0; i < vec.entries.size(); ++i) {
        out << format_real(vec.entries(i)) << '\n';
    }
    if (!out) {
        throw std::runtime_error("failed while writing model file: " + path);
    }
}

TabularMdp load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open model file: " + path);
    }
    std::string magic;
    int version = 0, n_states = 0, n_actions = 0, rank = 0;
    double discount = 0.0;
    in >> magic >> version >> n_states >> n_actions >> rank >> discount;
    if (!in || magic != "pvelab-model" || version != 1) {
        throw std::runtime_error("not a pvelab model file: " + path);
    }
    const long expected = static_cast<long>(n_states) * n_actions +
                          static_cast<long>(n_actions) * n_states * n_states;
    Vec entries(expected);
    for (long i = 0; i < expected; ++i) {
        in >> entries(i);
    }
    if (!in) {
        throw std::runtime_error("truncated model file: " + path);
    }
    return devectorize_model(entries, n_states, n_actions, discount);
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header)
    : path_(path) {
    buffer_ = header + "\n";
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) buffer_ += ',';
        buffer_ += fields[i];
    }
    buffer_ += '\n';
}

void CsvWriter::flush() {
    std::ofstream out(path_);
    if (!out) {
        throw std::runtime_error("cannot write csv file: " + path_);
    }
    out << buffer_;
    if (!out) {
        throw std::runtime_error("failed while writing csv file: " + path_);
    }
}

namespace {

std::string manifest_body(const std::string& config_text, std::uint64_t seed) {
    std::ostringstream body;
    body << "config_hash = " << fnv1a_hash(config_text) << "\n"
         << "seed = " << seed << "\n";
    return body.str();
}

std::string manifest_path(const std::string& dir) {
    return (std::filesystem::path(dir) / "manifest.txt").string();
}

}  // namespace

void write_manifest(const std::string& dir, const std::string& config_text,
                    std::uint64_t seed, const std::string& extra_note) {
    std::filesystem::create_directories(dir);
    std::ofstream out(manifest_path(dir));
    if (!out) {
        throw std::runtime_error("cannot write manifest in: " + dir);
    }
    out << manifest_body(config_text, seed);
    if (!extra_note.empty()) {
        out << "note = " << extra_note << "\n";
    }
    out << "\n# canonical configuration\n" << config_text;
}

bool manifest_allows(const std::string& dir, const std::string& config_text,
                     std::uint64_t seed, bool force) {
    if (force) return true;
    std::ifstream in(manifest_path(dir));
    if (!in) return true;   // no previous run recorded
    std::string expected = manifest_body(config_text, seed);
    std::string actual(expected.size(), '\0');
    in.read(actual.data(), static_cast<std::streamsize>(actual.size()));
    actual.resize(static_cast<std::size_t>(in.gcount()));
    return actual == expected;
}

}  // namespace pvelab
