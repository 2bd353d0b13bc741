#pragma once

#include <cstdint>
#include <vector>

#include "armas/error.hpp"

namespace armas {

// A contiguous run of lost samples. Corruption zero-fills the run.
struct GapSpec {
    uint64_t start = 0;
    uint64_t len = 0;
};

// Gaps must be non-empty runs, inside [0, signal_len), pairwise disjoint.
inline void validate_gaps(const std::vector<GapSpec>& gaps, uint64_t signal_len) {
    for (const auto& g : gaps) {
        if (g.len == 0) fail("GapOutOfRange", "gap of length 0");
        if (g.start + g.len > signal_len) fail("GapOutOfRange", "gap extends past end of signal");
    }
    for (size_t i = 0; i < gaps.size(); ++i) {
        for (size_t j = i + 1; j < gaps.size(); ++j) {
            const auto& a = gaps[i];
            const auto& b = gaps[j];
            if (a.start < b.start + b.len && b.start < a.start + a.len)
                fail("OverlappingGaps", "gaps overlap");
        }
    }
}

inline std::vector<char> gap_mask(const std::vector<GapSpec>& gaps, uint64_t signal_len) {
    std::vector<char> mask(signal_len, 0);
    for (const auto& g : gaps)
        for (uint64_t i = g.start; i < g.start + g.len; ++i) mask[i] = 1;
    return mask;
}

} // namespace armas
