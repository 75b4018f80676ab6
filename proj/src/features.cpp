#include "mfts/features.hpp"

#include <algorithm>
#include <stdexcept>

#include "mfts/stats.hpp"

namespace mfts {

const std::array<std::string, 8>& FeatureVector::names() {
    static const std::array<std::string, 8> kNames = {
        "std", "max", "median", "h_mean", "h_std", "h1", "h2", "delta_h"};
    return kNames;
}

std::array<double, 8> FeatureVector::values() const {
    return {std_dev, max_value, median, h_mean, h_std, h1, h2, delta_h};
}

FeatureVector extract_features(const TimeSeries& series, const MfdfaResult& mfdfa_result) {
    if (series.empty()) {
        throw std::invalid_argument("extract_features: empty series");
    }
    FeatureVector f;
    f.std_dev = sample_std(series);
    f.max_value = *std::max_element(series.begin(), series.end());
    f.median = mfts::median(series);
    f.h_mean = mean(mfdfa_result.h_of_q);
    f.h_std = sample_std(mfdfa_result.h_of_q);
    // h() throws when a required q is not on the grid.
    f.h1 = mfdfa_result.h(1.0);
    f.h2 = mfdfa_result.h(2.0);
    f.delta_h = mfdfa_result.h(0.1) - mfdfa_result.h(5.0);
    return f;
}

} // namespace mfts
