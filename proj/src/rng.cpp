#include "pvelab/rng.hpp"

namespace pvelab {

std::uint64_t derive_seed(std::uint64_t root, std::string_view component,
                          std::uint64_t index) {
    // FNV-1a over (root, name, index), then one splitmix round to spread bits.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t byte) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    };
    for (int i = 0; i < 8; ++i) mix((root >> (8 * i)) & 0xff);
    for (char c : component) mix(static_cast<unsigned char>(c));
    for (int i = 0; i < 8; ++i) mix((index >> (8 * i)) & 0xff);
    Rng spread(h);
    return spread.next_u64();
}

}  // namespace pvelab
