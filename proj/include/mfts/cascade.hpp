#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mfts {

using TimeSeries = std::vector<double>;

/// Parameters of a conservative binomial multiplicative cascade. The series
/// length is 2^n; interval weights are drawn from Beta(alpha, beta).
struct CascadeParams {
    int n = 1;
    double alpha = 1.0;
    double beta = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Generates the cascade measure at refinement level n. The result has
/// length 2^n, every value lies strictly in (0, 1) and the values sum to 1
/// (mass is conserved at every level). Deterministic for a given seed.
TimeSeries generate_cascade(const CascadeParams& params);

/// Deterministic cascade from explicit weights in draw order: one weight
/// per interval, left to right within each level, levels in order. Needs
/// 2^n - 1 weights, each in (0, 1). An interval of mass m splits into
/// (m * w, m * (1 - w)).
TimeSeries cascade_from_weights(int n, std::span<const double> weights);

/// Symmetric Beta shape producing an asymptotic generalized Hurst exponent
/// h(2) = H for cascades with Beta(alpha, alpha) weights:
///   alpha = (r - 1) / (2 - r),  r = 2^(2H-1),  H in (0.5, 1).
double alpha_for_hurst(double hurst);

/// Inverse of alpha_for_hurst: H = (1 + log2((2a+1)/(a+1))) / 2.
double hurst_for_alpha(double alpha);

} // namespace mfts
