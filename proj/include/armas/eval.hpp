#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "armas/audio_io.hpp"
#include "armas/gap.hpp"
#include "armas/regress.hpp"

namespace armas {

// SNR value reported when the error is exactly zero.
constexpr double kSnrCapDb = 300.0;

struct MetricsReport {
    double snr_full_db = 0.0;
    double snr_gap_db = 0.0;
    double lsd_db = 0.0; // log-spectral distance; proxy metric, not PEAQ/ODG
    double pearson_r = 0.0;
    std::vector<double> per_gap_snr_db;
};

struct BenchmarkPlan {
    std::vector<std::string> clips;
    std::vector<std::string> methods = {"zero", "linear", "janssen", "rf"};
    std::vector<int> gap_lengths_ms = {100, 300};
    int gaps_per_clip = 1;
    uint64_t seed = 1;
    bool record_timing = true; // false writes wall_ms as 0 for reproducible CSVs
    ReconstructConfig reconstruct;
};

// Uniformly random pairwise-disjoint gaps, at least half a second from the
// clip edges; deterministic per seed. Errors: DoesNotFit.
std::vector<GapSpec> simulate_gaps(uint64_t length, uint32_t sample_rate,
                                   const std::vector<int>& gap_ms, int count,
                                   uint64_t seed);

// 10*log10(|ref|^2 / |ref - test|^2), capped at kSnrCapDb for zero error.
// Errors: LengthMismatch, ZeroReference.
double snr(const std::vector<double>& reference, const std::vector<double>& test);

// Same ratio over the concatenated gap samples only.
double snr_gap(const std::vector<double>& reference, const std::vector<double>& test,
               const std::vector<GapSpec>& gaps);

// Mean over Hann-windowed frames of the RMS difference of the two power
// spectra in dB, floored at -100 dB per bin. Errors: TooShort, LengthMismatch.
double log_spectral_distance(const std::vector<double>& reference,
                             const std::vector<double>& test,
                             size_t frame = 2048, size_t hop = 512);

MetricsReport evaluate(const AudioClip& reference, const AudioClip& test,
                       const std::vector<GapSpec>& gaps);

std::string metrics_to_json(const MetricsReport& report);

struct BenchmarkResult {
    std::string csv_path;
    std::string summary_path;
    int tests = 0;
    int failures = 0;
};

// Runs clip x gap-length x method: embed, corrupt, reconstruct, score. Writes
// results.csv (one row per test), summary.json (win counts per metric) and the
// reconstructed WAVs into out_dir. Per-test failures are recorded as rows with
// an error tag and the run continues.
BenchmarkResult run_benchmark(const BenchmarkPlan& plan, const std::string& out_dir);

BenchmarkPlan plan_from_json(const std::string& text);

} // namespace armas
