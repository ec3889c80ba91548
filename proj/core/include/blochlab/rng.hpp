#ifndef BLOCHLAB_RNG_HPP
#define BLOCHLAB_RNG_HPP

#include <cstdint>

namespace blochlab {

/// Counter-friendly 64-bit generator (splitmix64). Used everywhere a
/// reproducible stream is needed; cheap enough to reseed per sample index,
/// which keeps sample streams prefix-stable under budget growth.
struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

    uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    uint64_t below(uint64_t bound) { return next() % bound; }
};

/// Stream key: hashes up to four components into a fresh seed.
inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c = 0, uint64_t d = 0) {
    SplitMix64 rng{a ^ (b * 0x9E3779B97F4A7C15ULL) ^ (c * 0xC2B2AE3D27D4EB4FULL) ^
                   (d * 0x165667B19E3779F9ULL)};
    return rng.next();
}

}  // namespace blochlab

#endif
