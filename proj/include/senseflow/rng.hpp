#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace senseflow {

/// splitmix64 step; used to derive independent substream seeds (per phone,
/// per replication) from one scenario seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream + 1));
}

/// Explicit distribution recipes on top of the standardized mt19937_64
/// engine, so the same seed replays the same stream on any build
/// (std::*_distribution would not guarantee that).
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Box-Muller without state, one draw per two engine steps.
inline double gaussian(std::mt19937_64& rng, double mean, double sigma) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(6.283185307179586476925287 * u2);
}

} // namespace senseflow
