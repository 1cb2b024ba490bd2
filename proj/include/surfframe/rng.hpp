#pragma once

#include <cstdint>
#include <random>

namespace surfframe {

/// splitmix64 step; used to fan a single experiment seed out to per-module
/// streams so that adding a consumer never perturbs the others.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic sub-seed for a named consumer of the global seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t s = seed ^ (0x6a09e667f3bcc909ull * (stream_id + 1));
    return splitmix64(s);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream_id = 0) {
    return std::mt19937_64(derive_seed(seed, stream_id));
}

}  // namespace surfframe
