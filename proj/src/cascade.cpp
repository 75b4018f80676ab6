#include "mfts/cascade.hpp"

#include <cmath>
#include <stdexcept>

#include "mfts/random.hpp"

namespace mfts {

void CascadeParams::validate() const {
    if (n < 1) {
        throw std::invalid_argument("cascade: iteration count n must be >= 1");
    }
    if (n > 30) {
        throw std::invalid_argument("cascade: iteration count n too large");
    }
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw std::invalid_argument("cascade: Beta shape parameters must be > 0");
    }
}

TimeSeries generate_cascade(const CascadeParams& params) {
    params.validate();
    Rng rng(params.seed);
    TimeSeries mass{1.0};
    TimeSeries next;
    for (int level = 0; level < params.n; ++level) {
        next.resize(mass.size() * 2);
        // One independent weight per interval, drawn left to right.
        for (std::size_t i = 0; i < mass.size(); ++i) {
            const double w = beta_sample(rng, params.alpha, params.beta);
            next[2 * i] = mass[i] * w;
            next[2 * i + 1] = mass[i] * (1.0 - w);
        }
        mass.swap(next);
    }
    return mass;
}

TimeSeries cascade_from_weights(int n, std::span<const double> weights) {
    if (n < 1 || n > 30) {
        throw std::invalid_argument("cascade: iteration count n must be in [1, 30]");
    }
    if (weights.size() != (1ULL << n) - 1) {
        throw std::invalid_argument("cascade: need 2^n - 1 weights");
    }
    for (double w : weights) {
        if (!(w > 0.0 && w < 1.0)) {
            throw std::invalid_argument("cascade: weights must lie in (0, 1)");
        }
    }
    TimeSeries mass{1.0};
    TimeSeries next;
    std::size_t used = 0;
    for (int level = 0; level < n; ++level) {
        next.resize(mass.size() * 2);
        for (std::size_t i = 0; i < mass.size(); ++i) {
            const double w = weights[used++];
            next[2 * i] = mass[i] * w;
            next[2 * i + 1] = mass[i] * (1.0 - w);
        }
        mass.swap(next);
    }
    return mass;
}

double alpha_for_hurst(double hurst) {
    if (!(hurst > 0.5 && hurst < 1.0)) {
        throw std::invalid_argument("alpha_for_hurst: H must be in (0.5, 1)");
    }
    const double r = std::exp2(2.0 * hurst - 1.0);
    return (r - 1.0) / (2.0 - r);
}

double hurst_for_alpha(double alpha) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("hurst_for_alpha: alpha must be > 0");
    }
    return 0.5 * (1.0 + std::log2((2.0 * alpha + 1.0) / (alpha + 1.0)));
}

} // namespace mfts
