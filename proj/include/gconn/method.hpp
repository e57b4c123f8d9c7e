#pragma once

#include <cstdint>
#include <variant>

namespace gconn {

struct ExactTag {};

/// Monte Carlo configuration. Worker w draws from substream (seed, w); partial
/// sums merge in ascending worker order, so a fixed triple (samples, seed,
/// workers) replays byte-identical estimates.
struct McParams {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

using Method = std::variant<ExactTag, McParams>;

/// Stable per-check seed derivation (splitmix64 of seed and salt).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace gconn
