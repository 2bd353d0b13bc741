#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "armas/audio_io.hpp"
#include "armas/gap.hpp"
#include "armas/hcr.hpp"

namespace armas {

struct StegoKey {
    uint64_t seed = 0;
};

// Bijection on {0..L-1}. Applying p to x gives y[i] = x[p[i]].
struct Permutation {
    std::vector<uint64_t> mapping;

    size_t size() const { return mapping.size(); }
};

// Sidecar record binding a stego file to everything extraction assumes known:
// the key, matrix dimensions, scale parameters and the gap list.
struct Manifest {
    int version = 1;
    StegoKey seed;
    uint64_t orig_len = 0;
    uint32_t matrix_rows = 0;
    uint32_t matrix_cols = 0;
    ScaleParams scale;
    uint32_t sample_rate = 0;
    double sigma = 1.5;
    std::vector<GapSpec> gaps;
};

struct SelfEmbedResult {
    AudioClip stego;
    Manifest manifest;
};

// Fisher-Yates driven by SplitMix64(key.seed), iterating from length-1 down
// to 1, index j = next() % (i+1). Errors: ZeroLength.
Permutation make_permutation(uint64_t length, StegoKey key);

// q with q[p[i]] = i. Errors: NotABijection.
Permutation invert_permutation(const Permutation& p);

template <typename T>
std::vector<T> apply_permutation(const Permutation& p, const std::vector<T>& x) {
    std::vector<T> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = x[p.mapping[i]];
    return y;
}

// Sets the LSB of each sample to the given bit; all other bits unchanged.
// Errors: LengthMismatch.
std::vector<int16_t> embed_lsb(const std::vector<int16_t>& samples,
                               const std::vector<uint8_t>& bits);

// Two's-complement LSB of each sample.
std::vector<uint8_t> extract_lsb(const std::vector<int16_t>& samples);

// Full embedding pipeline: scale -> reshape -> dither -> flatten -> permute
// (seed defaults to the sample count) -> embed into the PCM LSBs.
// Errors: TooShort.
SelfEmbedResult self_embed(const AudioClip& clip, uint64_t seed_override = 0,
                           bool has_seed_override = false, double sigma = 1.5);

// Recovers the smoothed side information E'' from a possibly-corrupted stego
// clip: LSBs -> inverse permutation -> reshape -> Gaussian filter -> flatten.
// Errors: ManifestMismatch.
std::vector<double> extract_side_info(const AudioClip& stego, const Manifest& manifest);

// Manifest JSON sidecar (schema version 1, fixed field names).
std::string manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const std::string& text);
void save_manifest(const Manifest& m, const std::string& path);
Manifest load_manifest(const std::string& path);

} // namespace armas
