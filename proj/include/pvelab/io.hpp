#pragma once

#include <string>
#include <vector>

#include "pvelab/mdp.hpp"

namespace pvelab {

/// Formats a double with 17 significant digits (round-trips bit-exactly).
std::string format_real(double x);

/// Text model file: a header line
///   pvelab-model 1 <n_states> <n_actions> <rank> <discount>
/// followed by whitespace-separated reals in vectorize_model ordering.
void save_model(const std::string& path, const TabularMdp& model,
                int rank = -1);
TabularMdp load_model(const std::string& path);

/// Minimal CSV emitter; all reals go through format_real.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& header);
    void row(const std::vector<std::string>& fields);
    static std::string real(double x) { return format_real(x); }

  private:
    std::string path_;
    std::string buffer_;
    friend class CsvFlusher;
  public:
    void flush();
};

/// Output directories are content-addressed by a config hash recorded here;
/// a rerun with a different hash refuses to overwrite without force.
void write_manifest(const std::string& dir, const std::string& config_text,
                    std::uint64_t seed, const std::string& extra_note);
/// Returns false when the directory already holds a mismatched manifest.
bool manifest_allows(const std::string& dir, const std::string& config_text,
                     std::uint64_t seed, bool force);

}  // namespace pvelab
