#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "armas/audio_io.hpp"

namespace armas {

// Row-major matrix view of a signal; the tail beyond orig_len is zero padding.
struct SignalMatrix {
    std::vector<double> data; // rows*cols, row-major
    size_t rows = 0;
    size_t cols = 0;
    size_t orig_len = 0;

    double at(size_t r, size_t c) const { return data[r * cols + c]; }
};

// Binary halftone of a SignalMatrix.
struct BitPlane {
    std::vector<uint8_t> bits; // rows*cols, row-major, each 0 or 1
    size_t rows = 0;
    size_t cols = 0;
    size_t orig_len = 0;
};

struct GaussianConfig {
    double sigma = 1.5;

    // kernel is (2*floor(2*sigma)+1) square
    int kernel_size() const;
};

struct CorrelationReport {
    double pearson_r = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double rmse = 0.0;
    double r_squared = 0.0;
};

// Row-major fill; rows = 0 picks n = floor(sqrt(L)), m = ceil(L/n).
// Errors: EmptyInput, RowsExceedLength.
SignalMatrix reshape_to_matrix(const std::vector<double>& values, size_t rows = 0);

// Row-major traversal truncated to orig_len; inverse of reshape_to_matrix.
std::vector<double> flatten_matrix(const SignalMatrix& matrix);

// Floyd-Steinberg error diffusion. Raster scan, threshold 127.5 against 255,
// weights 7/16 right, 3/16 below-left, 5/16 below, 1/16 below-right;
// out-of-bounds error discarded. Errors: OutOfRange.
BitPlane dither(const SignalMatrix& matrix);

// Sampled 2-D Gaussian, renormalized to sum 1. Errors: NonPositiveSigma.
std::vector<double> gaussian_kernel(const GaussianConfig& config);

// Convolves the {0,1} plane with the Gaussian kernel, replicate padding at
// borders. Output values lie in [0,1].
SignalMatrix inverse_halftone(const BitPlane& bits, const GaussianConfig& config);

// Least-squares fit of original (as fraction of 255) on reconstructed.
// Errors: LengthMismatch, ZeroVariance.
CorrelationReport hcr_roundtrip_stats(const ByteSignal& original,
                                      const std::vector<double>& reconstructed);

// Debug exports for visual inspection of the halftone pipeline.
void write_pgm_p4(const BitPlane& bits, const std::string& path);
void write_pgm_p5(const SignalMatrix& matrix, double lo, double hi, const std::string& path);

} // namespace armas
