#pragma once

#include <cstdint>
#include <string_view>

namespace pvelab {

/// Deterministic 64-bit generator (splitmix64). Hand-rolled so that streams
/// are identical across standard libraries and platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, n).
    int next_int(int n) {
        return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
    }

  private:
    std::uint64_t state_;
};

/// Derives an independent stream from (root seed, component name, index).
/// Adding experiments never perturbs existing streams.
std::uint64_t derive_seed(std::uint64_t root, std::string_view component,
                          std::uint64_t index);

}  // namespace pvelab
