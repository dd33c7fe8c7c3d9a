#pragma once

#include <cstdint>
#include <random>

namespace apcc {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; decorrelates nearby seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic per-trial seed derived from (master, trial).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial) {
    return mix64(mix64(master) ^ mix64(trial + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0, 1) with 53 random bits. Hand-rolled so that results
/// do not depend on the standard library's distribution implementation.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [-1, 1].
inline double uniform_sym(Rng& rng) {
    return 2.0 * uniform01(rng) - 1.0;
}

}  // namespace apcc
