#pragma once
// rng.hpp - small deterministic RNG so episode seeds reproduce bit-identically
// across platforms (std distributions are implementation-defined).

#include <cstdint>

namespace navsim {

struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed = 0x9E3779B97F4A7C15ULL) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next01(); }

    // Uniform integer in [0, n), n > 0.
    uint64_t below(uint64_t n) { return next() % n; }
};

}  // namespace navsim
