#pragma once

#include <array>
#include <string>
#include <vector>

#include "mfts/cascade.hpp"
#include "mfts/mfdfa.hpp"

namespace mfts {

/// The 8 statistical and multifractal characteristics used by the
/// feature-based classifier, in frozen order.
struct FeatureVector {
    double std_dev = 0.0;   // sample standard deviation of the series
    double max_value = 0.0;
    double median = 0.0;
    double h_mean = 0.0;    // mean of h(q) over the q grid
    double h_std = 0.0;     // sample standard deviation of h(q)
    double h1 = 0.0;        // h(1)
    double h2 = 0.0;        // h(2), the Hurst estimate
    double delta_h = 0.0;   // h(0.1) - h(5)

    static constexpr std::size_t size() { return 8; }
    static const std::array<std::string, 8>& names();
    std::array<double, 8> values() const;
};

/// Extracts the feature vector from a series and its MFDFA result. The
/// result's q grid must contain 0.1, 1, 2 and 5.
FeatureVector extract_features(const TimeSeries& series, const MfdfaResult& mfdfa_result);

} // namespace mfts
