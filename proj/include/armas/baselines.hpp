#pragma once

#include <cstdint>
#include <vector>

#include "armas/gap.hpp"

namespace armas {

struct JanssenConfig {
    int ar_order = 0;          // 0 = min(256, context_len/3)
    int iterations = 10;
    size_t context_len = 4096; // samples used on each side of the gap

    int effective_order(size_t context) const;
};

// Gap samples set to 0. Errors: GapOutOfRange.
std::vector<double> fill_zero(const std::vector<double>& signal, const GapSpec& gap);

// Straight line between the samples bordering the gap. Errors: GapTouchesEdge.
std::vector<double> fill_linear(const std::vector<double>& signal, const GapSpec& gap);

// Biased estimator r[k] = (1/N) sum x[t] x[t+k]. Errors: TooShort.
std::vector<double> autocorrelation(const std::vector<double>& x, int max_lag);

struct ArFit {
    std::vector<double> coeffs;   // a[1..p]; predictor x[t] ~ -sum a[k] x[t-k]
    double residual_energy = 0.0; // per-sample prediction error power
};

// Levinson-Durbin recursion on the (p+1)-term autocorrelation.
// Errors: SingularToeplitz.
ArFit levinson_durbin(const std::vector<double>& r, int order);

// Iterative AR inpainting: alternate (1) AR(p) fit on context + current gap
// estimate, (2) exact least-squares solve for the gap samples (banded SPD
// system of bandwidth p). Gap initialized by linear interpolation.
// `residual_energies`, when given, receives one entry per iteration and is
// non-increasing. Errors: InsufficientContext, SingularSystem.
std::vector<double> janssen_inpaint(const std::vector<double>& signal, const GapSpec& gap,
                                    const JanssenConfig& config,
                                    std::vector<double>* residual_energies = nullptr);

} // namespace armas
