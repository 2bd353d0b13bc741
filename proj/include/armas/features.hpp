#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace armas {

// Analytic Morlet scalogram settings. Scales are geometrically spaced from
// freq_max down to freq_min with voices_per_octave steps per octave; the
// transform is L1-normalized (1/scale) so equal-amplitude tones give
// comparable ridge magnitudes across octaves.
struct ScalogramConfig {
    double omega0 = 6.0; // Morlet center frequency, rad per sample unit
    int voices_per_octave = 8;
    double freq_min = 20.0;
    double freq_max = 0.0; // 0 = sample_rate / 2

    // Long signals are transformed in overlapping blocks to bound FFT memory;
    // only interior columns of each block are kept.
    size_t max_direct_len = size_t(1) << 20;
    size_t block_len = size_t(1) << 18;
    size_t block_overlap = 4096;
};

struct Scalogram {
    std::vector<std::complex<double>> coeffs; // n_scales x length, row-major
    std::vector<double> scales;               // per row, high frequency first
    std::vector<double> frequencies_hz;       // center frequency per row
    size_t length = 0;

    size_t n_scales() const { return scales.size(); }
    std::complex<double> at(size_t scale_idx, size_t t) const {
        return coeffs[scale_idx * length + t];
    }
};

// Per-time-index feature vectors: [Re(W[:,t]) ; side_info[t]].
struct FeatureTable {
    std::vector<double> values; // n_rows x dim, row-major
    size_t n_rows = 0;
    size_t dim = 0;

    const double* row(size_t t) const { return values.data() + t * dim; }
};

// Continuous wavelet transform via frequency-domain multiplication with
// periodic extension. Errors: TooShort, BadFrequencyRange.
Scalogram cwt_scalogram(const std::vector<double>& signal, uint32_t sample_rate,
                        const ScalogramConfig& config);

// Errors: LengthMismatch, NonFinite.
FeatureTable assemble_features(const Scalogram& scalogram,
                               const std::vector<double>& side_info);

// CSV dump with header s0..s{n-1},e.
void dump_features_csv(const FeatureTable& table, const std::string& path);

} // namespace armas
