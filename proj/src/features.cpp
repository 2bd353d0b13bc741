#include "armas/features.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <fftw3.h>

#include "armas/error.hpp"

namespace armas {

namespace {

constexpr double kPi = 3.14159265358979323846;

// One c2c FFT size, forward+backward plans, reusable buffers.
class FftPair {
public:
    explicit FftPair(size_t n) : n_(n) {
        buf_ = fftw_alloc_complex(n);
        fwd_ = fftw_plan_dft_1d(int(n), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(int(n), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftPair() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    std::vector<std::complex<double>> forward(const double* x) {
        for (size_t i = 0; i < n_; ++i) {
            buf_[i][0] = x[i];
            buf_[i][1] = 0.0;
        }
        fftw_execute(fwd_);
        std::vector<std::complex<double>> out(n_);
        for (size_t i = 0; i < n_; ++i) out[i] = {buf_[i][0], buf_[i][1]};
        return out;
    }

    // Inverse transform of spectrum*filter, normalized by 1/n, written to dst.
    void backward_filtered(const std::vector<std::complex<double>>& spectrum,
                           const std::vector<double>& filter, std::complex<double>* dst) {
        for (size_t i = 0; i < n_; ++i) {
            buf_[i][0] = spectrum[i].real() * filter[i];
            buf_[i][1] = spectrum[i].imag() * filter[i];
        }
        fftw_execute(bwd_);
        double inv = 1.0 / double(n_);
        for (size_t i = 0; i < n_; ++i) dst[i] = {buf_[i][0] * inv, buf_[i][1] * inv};
    }

private:
    size_t n_;
    fftw_complex* buf_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

// Morlet frequency response at scale s, sampled on the length-n DFT grid.
// L1 normalization keeps the factor free of sqrt(s).
std::vector<double> morlet_filter(size_t n, double scale, double omega0) {
    std::vector<double> h(n);
    double c = std::pow(kPi, -0.25) * std::sqrt(2.0 * kPi);
    for (size_t k = 0; k < n; ++k) {
        double omega = 2.0 * kPi * double(k) / double(n);
        if (omega > kPi) omega -= 2.0 * kPi;
        double u = scale * omega - omega0;
        h[k] = c * std::exp(-0.5 * u * u);
    }
    return h;
}

// CWT of signal[from..from+n) written into the scalogram columns
// [keep_lo, keep_hi) (global indices).
void cwt_block(const std::vector<double>& signal, size_t from, size_t n,
               const Scalogram& shape, size_t keep_lo, size_t keep_hi, double omega0,
               std::vector<std::complex<double>>& coeffs) {
    FftPair fft(n);
    std::vector<std::complex<double>> spectrum = fft.forward(signal.data() + from);
    std::vector<std::complex<double>> row(n);
    for (size_t s = 0; s < shape.n_scales(); ++s) {
        std::vector<double> filt = morlet_filter(n, shape.scales[s], omega0);
        fft.backward_filtered(spectrum, filt, row.data());
        for (size_t t = keep_lo; t < keep_hi; ++t)
            coeffs[s * shape.length + t] = row[t - from];
    }
}

} // namespace

Scalogram cwt_scalogram(const std::vector<double>& signal, uint32_t sample_rate,
                        const ScalogramConfig& config) {
    size_t n = signal.size();
    if (n < 16) fail("TooShort", "signal too short for a scalogram");
    double fmax = config.freq_max > 0.0 ? config.freq_max : double(sample_rate) / 2.0;
    double fmin = config.freq_min;
    if (!(fmin > 0.0) || !(fmin < fmax) || fmax > double(sample_rate) / 2.0 + 1e-9)
        fail("BadFrequencyRange", "need 0 < freq_min < freq_max <= Nyquist");
    if (config.voices_per_octave < 1) fail("BadFrequencyRange", "voices_per_octave must be >= 1");

    int v = config.voices_per_octave;
    size_t n_scales = size_t(std::floor(double(v) * std::log2(fmax / fmin))) + 1;

    Scalogram out;
    out.length = n;
    out.scales.resize(n_scales);
    out.frequencies_hz.resize(n_scales);
    for (size_t i = 0; i < n_scales; ++i) {
        double f = fmax * std::pow(2.0, -double(i) / double(v));
        out.frequencies_hz[i] = f;
        out.scales[i] = config.omega0 * double(sample_rate) / (2.0 * kPi * f);
    }
    out.coeffs.assign(n_scales * n, {0.0, 0.0});

    if (n <= config.max_direct_len) {
        cwt_block(signal, 0, n, out, 0, n, config.omega0, out.coeffs);
        return out;
    }

    size_t block = config.block_len;
    size_t overlap = config.block_overlap;
    if (block < 2 * overlap || block >= n)
        fail("BadFrequencyRange", "invalid block configuration");
    size_t advance = block - overlap;

    size_t done = 0;
    for (size_t k = 0; done < n; ++k) {
        size_t start = k * advance;
        bool last = start + block >= n;
        if (last) start = n - block;
        size_t keep_hi = last ? n : start + advance + overlap / 2;
        cwt_block(signal, start, block, out, done, keep_hi, config.omega0, out.coeffs);
        done = keep_hi;
        if (last) break;
    }
    return out;
}

FeatureTable assemble_features(const Scalogram& scalogram,
                               const std::vector<double>& side_info) {
    if (scalogram.length != side_info.size())
        fail("LengthMismatch", "scalogram and side info differ in length");
    size_t n_scales = scalogram.n_scales();
    size_t len = scalogram.length;

    FeatureTable table;
    table.n_rows = len;
    table.dim = n_scales + 1;
    table.values.resize(len * table.dim);
    for (size_t t = 0; t < len; ++t) {
        double* row = table.values.data() + t * table.dim;
        for (size_t s = 0; s < n_scales; ++s) row[s] = scalogram.at(s, t).real();
        row[n_scales] = side_info[t];
    }
    for (double x : table.values)
        if (!std::isfinite(x)) fail("NonFinite", "feature table contains non-finite values");
    return table;
}

void dump_features_csv(const FeatureTable& table, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) fail("IoError", "cannot open " + path);
    for (size_t s = 0; s + 1 < table.dim; ++s) f << "s" << s << ",";
    f << "e\n";
    char buf[32];
    for (size_t t = 0; t < table.n_rows; ++t) {
        const double* row = table.row(t);
        for (size_t c = 0; c < table.dim; ++c) {
            std::snprintf(buf, sizeof buf, "%.9g", row[c]);
            f << buf << (c + 1 < table.dim ? "," : "\n");
        }
    }
}

} // namespace armas
