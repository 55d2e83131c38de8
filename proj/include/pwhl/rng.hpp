#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace pwhl {

using Rng = std::mt19937_64;

/// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for an independent stream identified by a path of counters below `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix64(seed);
    for (auto c : path) s = mix64(s ^ mix64(c + 0x632be59bd9b4e019ULL));
    return s;
}

/// Named streams so that design, noise, init and tuning never share draws.
enum class Stream : std::uint64_t { Design = 1, Noise = 2, Init = 3, Tuning = 4, Holdout = 5, Probe = 6 };

inline Rng make_rng(std::uint64_t seed, Stream stream) {
    return Rng(derive_seed(seed, {static_cast<std::uint64_t>(stream)}));
}

} // namespace pwhl
