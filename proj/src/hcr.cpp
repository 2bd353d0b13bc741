#include "armas/hcr.hpp"

#include <cmath>
#include <fstream>

#include "armas/error.hpp"

namespace armas {

SignalMatrix reshape_to_matrix(const std::vector<double>& values, size_t rows) {
    if (values.empty()) fail("EmptyInput", "cannot reshape an empty sequence");
    size_t len = values.size();
    size_t n = rows;
    if (n == 0) n = size_t(std::floor(std::sqrt(double(len))));
    if (n > len) fail("RowsExceedLength", "row count exceeds sequence length");
    size_t m = (len + n - 1) / n;

    SignalMatrix out;
    out.rows = n;
    out.cols = m;
    out.orig_len = len;
    out.data.assign(n * m, 0.0);
    std::copy(values.begin(), values.end(), out.data.begin());
    return out;
}

std::vector<double> flatten_matrix(const SignalMatrix& matrix) {
    return std::vector<double>(matrix.data.begin(),
                               matrix.data.begin() + std::ptrdiff_t(matrix.orig_len));
}

BitPlane dither(const SignalMatrix& matrix) {
    for (double v : matrix.data)
        if (v < 0.0 || v > 255.0) fail("OutOfRange", "dither input must lie in [0, 255]");

    size_t rows = matrix.rows, cols = matrix.cols;
    std::vector<double> work = matrix.data;
    BitPlane out;
    out.rows = rows;
    out.cols = cols;
    out.orig_len = matrix.orig_len;
    out.bits.assign(rows * cols, 0);

    for (size_t y = 0; y < rows; ++y) {
        double* row = work.data() + y * cols;
        double* below = (y + 1 < rows) ? work.data() + (y + 1) * cols : nullptr;
        for (size_t x = 0; x < cols; ++x) {
            double old = row[x];
            uint8_t bit = old >= 127.5 ? 1 : 0;
            out.bits[y * cols + x] = bit;
            double err = old - 255.0 * bit;
            if (x + 1 < cols) row[x + 1] += err * (7.0 / 16.0);
            if (below) {
                if (x > 0) below[x - 1] += err * (3.0 / 16.0);
                below[x] += err * (5.0 / 16.0);
                if (x + 1 < cols) below[x + 1] += err * (1.0 / 16.0);
            }
        }
    }
    return out;
}

int GaussianConfig::kernel_size() const {
    return 2 * int(std::floor(2.0 * sigma)) + 1;
}

std::vector<double> gaussian_kernel(const GaussianConfig& config) {
    if (!(config.sigma > 0.0)) fail("NonPositiveSigma", "sigma must be positive");
    int size = config.kernel_size();
    int half = size / 2;
    std::vector<double> k(size_t(size) * size);
    double sum = 0.0;
    for (int y = -half; y <= half; ++y) {
        for (int x = -half; x <= half; ++x) {
            double v = std::exp(-(double(x) * x + double(y) * y) / (2.0 * config.sigma * config.sigma));
            k[size_t(y + half) * size + size_t(x + half)] = v;
            sum += v;
        }
    }
    for (double& v : k) v /= sum;
    return k;
}

SignalMatrix inverse_halftone(const BitPlane& bits, const GaussianConfig& config) {
    std::vector<double> kernel = gaussian_kernel(config);
    int size = config.kernel_size();
    int half = size / 2;
    ptrdiff_t rows = ptrdiff_t(bits.rows), cols = ptrdiff_t(bits.cols);

    SignalMatrix out;
    out.rows = bits.rows;
    out.cols = bits.cols;
    out.orig_len = bits.orig_len;
    out.data.assign(bits.bits.size(), 0.0);

    for (ptrdiff_t y = 0; y < rows; ++y) {
        for (ptrdiff_t x = 0; x < cols; ++x) {
            double acc = 0.0;
            for (int dy = -half; dy <= half; ++dy) {
                ptrdiff_t sy = std::min(std::max(y + dy, ptrdiff_t(0)), rows - 1);
                const uint8_t* src = bits.bits.data() + sy * cols;
                const double* krow = kernel.data() + size_t(dy + half) * size;
                for (int dx = -half; dx <= half; ++dx) {
                    ptrdiff_t sx = std::min(std::max(x + dx, ptrdiff_t(0)), cols - 1);
                    acc += krow[dx + half] * src[sx];
                }
            }
            out.data[size_t(y) * bits.cols + size_t(x)] = acc;
        }
    }
    return out;
}

CorrelationReport hcr_roundtrip_stats(const ByteSignal& original,
                                      const std::vector<double>& reconstructed) {
    const auto& ov = original.values;
    if (ov.size() != reconstructed.size())
        fail("LengthMismatch", "original and reconstruction differ in length");
    size_t n = ov.size();
    if (n < 2) fail("ZeroVariance", "need at least two samples");

    // Regress original (as fraction of 255) on the reconstruction.
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += reconstructed[i];
        sy += ov[i] / 255.0;
    }
    double mx = sx / double(n), my = sy / double(n);
    double sxx = 0, syy = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        double dx = reconstructed[i] - mx;
        double dy = ov[i] / 255.0 - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) fail("ZeroVariance", "constant input to correlation");

    CorrelationReport rep;
    rep.pearson_r = sxy / std::sqrt(sxx * syy);
    rep.slope = sxy / sxx;
    rep.intercept = my - rep.slope * mx;
    double sse = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double pred = rep.slope * reconstructed[i] + rep.intercept;
        double e = ov[i] / 255.0 - pred;
        sse += e * e;
    }
    rep.rmse = std::sqrt(sse / double(n));
    rep.r_squared = rep.pearson_r * rep.pearson_r;
    return rep;
}

void write_pgm_p4(const BitPlane& bits, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail("IoError", "cannot open " + path);
    f << "P4\n" << bits.cols << " " << bits.rows << "\n";
    size_t row_bytes = (bits.cols + 7) / 8;
    std::vector<uint8_t> row(row_bytes);
    for (size_t y = 0; y < bits.rows; ++y) {
        std::fill(row.begin(), row.end(), 0);
        for (size_t x = 0; x < bits.cols; ++x) {
            // P4: 1 = black; show bit value 0 as black so halftones read like prints
            if (bits.bits[y * bits.cols + x] == 0) row[x / 8] |= uint8_t(0x80 >> (x % 8));
        }
        f.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row_bytes));
    }
}

void write_pgm_p5(const SignalMatrix& matrix, double lo, double hi, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail("IoError", "cannot open " + path);
    f << "P5\n" << matrix.cols << " " << matrix.rows << "\n255\n";
    double span = hi > lo ? hi - lo : 1.0;
    std::vector<uint8_t> row(matrix.cols);
    for (size_t y = 0; y < matrix.rows; ++y) {
        for (size_t x = 0; x < matrix.cols; ++x) {
            double v = (matrix.data[y * matrix.cols + x] - lo) / span * 255.0;
            row[x] = uint8_t(std::min(255.0, std::max(0.0, std::round(v))));
        }
        f.write(reinterpret_cast<const char*>(row.data()), std::streamsize(matrix.cols));
    }
}

} // namespace armas
