#pragma once

#include <cstdint>
#include <random>

namespace tvbma {

using Rng = std::mt19937_64;

/// Deterministic generator for substream `stream` of `seed`. Distinct
/// (seed, stream) pairs give statistically independent streams.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x7462u};
    return Rng(seq);
}

/// Mixes a parent seed with a child index into a new 64-bit seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t child) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (child + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace tvbma
