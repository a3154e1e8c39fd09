#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace rss {

// All randomness in the project flows through std::mt19937_64 plus the
// transforms below. The standard pins down the engine bit-for-bit; the
// standard *distributions* are implementation-defined, so we roll our own
// to keep seeded runs reproducible across platforms and compilers.

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent seeds from a base seed
// and one or more stream indices.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t a) { return mix64(base ^ mix64(a)); }

inline uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b) {
    return mix64(derive_seed(base, a) ^ mix64(b));
}

// Uniform double in [0, 1), 53 mantissa bits.
inline double uniform01(Rng& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
inline uint64_t uniform_below(Rng& rng, uint64_t n) {
    assert(n > 0);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % n;
}

inline int uniform_int(Rng& rng, int lo, int hi) {  // inclusive range
    return lo + int(uniform_below(rng, uint64_t(hi - lo + 1)));
}

// Exponential with the given mean.
inline double exponential(Rng& rng, double mean) {
    return -mean * std::log1p(-uniform01(rng));
}

// Fair coin from the engine's top bit.
inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

// Index drawn proportionally to non-negative weights.
inline size_t weighted_index(Rng& rng, std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform01(rng) * total;
    for (size_t i = 0; i + 1 < weights.size(); ++i) {
        u -= weights[i];
        if (u < 0.0) return i;
    }
    return weights.size() - 1;
}

}  // namespace rss
