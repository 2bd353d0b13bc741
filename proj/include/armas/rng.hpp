#pragma once

#include <cstdint>

namespace armas {

// SplitMix64. Every seeded decision in the pipeline (bit permutation, forest
// bootstraps, gap placement) flows from this generator so that independent
// implementations can reproduce outputs bit-exactly.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) by modulo reduction. The bias is negligible at the
    // lengths we draw over and keeping it reduction-free makes the recipe easy
    // to restate in other languages.
    uint64_t next_below(uint64_t bound) { return next() % bound; }

    // k-th output of a stream seeded with `seed`, in O(1). Used to derive
    // independent child seeds (per-tree, per-clip) from a master seed.
    static uint64_t nth(uint64_t seed, uint64_t k) {
        uint64_t z = seed + (k + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    uint64_t state_;
};

} // namespace armas
