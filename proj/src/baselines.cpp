#include "armas/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "armas/error.hpp"

namespace armas {

namespace {

// Residual energy of the AR polynomial (1, a1..ap) over the whole segment:
// sum over t in [p, n) of (seg[t] + sum_k a_k seg[t-k])^2.
double segment_energy(const std::vector<double>& seg, const std::vector<double>& poly) {
    size_t p = poly.size() - 1;
    double total = 0.0;
    for (size_t t = p; t < seg.size(); ++t) {
        double acc = 0.0;
        for (size_t k = 0; k <= p; ++k) acc += poly[k] * seg[t - k];
        total += acc * acc;
    }
    return total;
}

// Cholesky solve of the symmetric banded SPD system (half-bandwidth w).
// band[d * n + j] holds A[j + d, j]; overwritten with the L factor.
std::vector<double> solve_banded_spd(std::vector<double>& band, size_t n, size_t w,
                                     std::vector<double> rhs) {
    auto at = [&](size_t d, size_t j) -> double& { return band[d * n + j]; };
    for (size_t j = 0; j < n; ++j) {
        double diag = at(0, j);
        size_t k0 = j > w ? j - w : 0;
        for (size_t k = k0; k < j; ++k) {
            double ljk = at(j - k, k);
            diag -= ljk * ljk;
        }
        if (!(diag > 0.0)) fail("SingularSystem", "banded system not positive definite");
        double ljj = std::sqrt(diag);
        at(0, j) = ljj;
        size_t imax = std::min(j + w, n - 1);
        for (size_t i = j + 1; i <= imax; ++i) {
            double s = at(i - j, j);
            size_t kk0 = i > w ? i - w : 0;
            if (kk0 < k0) kk0 = k0;
            for (size_t k = kk0; k < j; ++k) s -= at(i - k, k) * at(j - k, k);
            at(i - j, j) = s / ljj;
        }
    }
    // forward: L y = rhs
    for (size_t i = 0; i < n; ++i) {
        double s = rhs[i];
        size_t k0 = i > w ? i - w : 0;
        for (size_t k = k0; k < i; ++k) s -= at(i - k, k) * rhs[k];
        rhs[i] = s / at(0, i);
    }
    // backward: L^T x = y
    for (size_t ii = n; ii-- > 0;) {
        double s = rhs[ii];
        size_t imax = std::min(ii + w, n - 1);
        for (size_t k = ii + 1; k <= imax; ++k) s -= at(k - ii, ii) * rhs[k];
        rhs[ii] = s / at(0, ii);
    }
    return rhs;
}

} // namespace

int JanssenConfig::effective_order(size_t context) const {
    if (ar_order > 0) return ar_order;
    return int(std::min<size_t>(256, context / 3));
}

std::vector<double> fill_zero(const std::vector<double>& signal, const GapSpec& gap) {
    validate_gaps({gap}, signal.size());
    std::vector<double> out = signal;
    std::fill(out.begin() + std::ptrdiff_t(gap.start),
              out.begin() + std::ptrdiff_t(gap.start + gap.len), 0.0);
    return out;
}

std::vector<double> fill_linear(const std::vector<double>& signal, const GapSpec& gap) {
    validate_gaps({gap}, signal.size());
    if (gap.start == 0 || gap.start + gap.len >= signal.size())
        fail("GapTouchesEdge", "linear fill needs a neighbor on each side");
    std::vector<double> out = signal;
    double a = signal[gap.start - 1];
    double b = signal[gap.start + gap.len];
    for (uint64_t i = 0; i < gap.len; ++i)
        out[gap.start + i] = a + (b - a) * double(i + 1) / double(gap.len + 1);
    return out;
}

std::vector<double> autocorrelation(const std::vector<double>& x, int max_lag) {
    if (max_lag < 0 || x.size() <= size_t(max_lag))
        fail("TooShort", "need more samples than lags");
    size_t n = x.size();
    std::vector<double> r(size_t(max_lag) + 1, 0.0);
    for (int k = 0; k <= max_lag; ++k) {
        double acc = 0.0;
        for (size_t t = 0; t + size_t(k) < n; ++t) acc += x[t] * x[t + size_t(k)];
        r[size_t(k)] = acc / double(n);
    }
    return r;
}

ArFit levinson_durbin(const std::vector<double>& r, int order) {
    if (r.empty() || !(r[0] > 0.0)) fail("SingularToeplitz", "autocorrelation r[0] must be positive");
    if (r.size() <= size_t(order)) fail("TooShort", "autocorrelation shorter than order");

    // polynomial form: c[0]=1, residual e[t] = sum_k c[k] x[t-k]
    std::vector<double> c(size_t(order) + 1, 0.0);
    c[0] = 1.0;
    double err = r[0];
    for (int i = 1; i <= order; ++i) {
        double acc = r[size_t(i)];
        for (int j = 1; j < i; ++j) acc += c[size_t(j)] * r[size_t(i - j)];
        double k = -acc / err;
        std::vector<double> next = c;
        for (int j = 1; j < i; ++j) next[size_t(j)] = c[size_t(j)] + k * c[size_t(i - j)];
        next[size_t(i)] = k;
        c = next;
        err *= 1.0 - k * k;
        if (!(err > 0.0)) {
            err = 0.0;
            break;
        }
    }

    ArFit fit;
    fit.coeffs.resize(size_t(order));
    for (int i = 1; i <= order; ++i) fit.coeffs[size_t(i - 1)] = -c[size_t(i)];
    fit.residual_energy = err;
    return fit;
}

std::vector<double> janssen_inpaint(const std::vector<double>& signal, const GapSpec& gap,
                                    const JanssenConfig& config,
                                    std::vector<double>* residual_energies) {
    if (gap.len == 0) return signal;
    validate_gaps({gap}, signal.size());
    size_t ctx = config.context_len;
    if (gap.start < ctx || gap.start + gap.len + ctx > signal.size())
        fail("InsufficientContext", "need context_len samples on both sides of the gap");
    int p = config.effective_order(ctx);
    if (p < 1 || size_t(p) >= ctx) fail("InsufficientContext", "AR order must be below context_len");

    size_t len = size_t(gap.len);
    std::vector<double> seg(signal.begin() + std::ptrdiff_t(gap.start - ctx),
                            signal.begin() + std::ptrdiff_t(gap.start + gap.len + ctx));
    size_t gs = ctx;

    // initial estimate: straight line across the gap
    {
        double a = seg[gs - 1], b = seg[gs + len];
        for (size_t i = 0; i < len; ++i)
            seg[gs + i] = a + (b - a) * double(i + 1) / double(len + 1);
    }

    double energy_cur = 0.0;
    size_t w = size_t(p);

    for (int it = 0; it < config.iterations; ++it) {
        ArFit fit = levinson_durbin(autocorrelation(seg, p), p);
        std::vector<double> poly(w + 1);
        poly[0] = 1.0;
        for (size_t k = 0; k < w; ++k) poly[k + 1] = -fit.coeffs[k];

        // b[k] = sum_i poly[i] poly[i+k], the AR polynomial's autocorrelation
        std::vector<double> b(w + 1, 0.0);
        for (size_t k = 0; k <= w; ++k)
            for (size_t i = 0; i + k <= w; ++i) b[k] += poly[i] * poly[i + k];

        std::vector<double> band((w + 1) * len, 0.0);
        for (size_t d = 0; d <= w; ++d)
            for (size_t j = 0; j + d < len; ++j) band[d * len + j] = b[d];

        std::vector<double> rhs(len, 0.0);
        for (size_t i = 0; i < len; ++i) {
            size_t g = gs + i;
            double acc = 0.0;
            for (size_t j = g - w; j <= g + w; ++j) {
                if (j >= gs && j < gs + len) continue;
                acc += b[size_t(j > g ? j - g : g - j)] * seg[j];
            }
            rhs[i] = -acc;
        }

        std::vector<double> candidate = solve_banded_spd(band, len, w, std::move(rhs));
        std::vector<double> saved(seg.begin() + std::ptrdiff_t(gs),
                                  seg.begin() + std::ptrdiff_t(gs + len));
        std::copy(candidate.begin(), candidate.end(), seg.begin() + std::ptrdiff_t(gs));
        double energy = segment_energy(seg, poly);

        // Accept the refit only while it lowers the joint residual, so the
        // recorded energies are non-increasing even though the Levinson fit
        // is not the exact minimizer of this objective.
        if (it > 0 && energy > energy_cur) {
            std::copy(saved.begin(), saved.end(), seg.begin() + std::ptrdiff_t(gs));
            if (residual_energies) residual_energies->push_back(energy_cur);
            continue;
        }
        energy_cur = energy;
        if (residual_energies) residual_energies->push_back(energy_cur);
    }

    std::vector<double> out = signal;
    std::copy(seg.begin() + std::ptrdiff_t(gs), seg.begin() + std::ptrdiff_t(gs + len),
              out.begin() + std::ptrdiff_t(gap.start));
    return out;
}

} // namespace armas
