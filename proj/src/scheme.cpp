#include "mfts/scheme.hpp"

#include <cmath>
#include <stdexcept>

namespace mfts {

namespace {
constexpr double kRangeLow = 0.51;
constexpr double kRangeHigh = 0.99;
constexpr double kBoundaryTol = 1e-9;
} // namespace

int HurstClassScheme::class_of(double hurst) const {
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const bool last = (i + 1 == intervals.size());
        if (hurst >= intervals[i].lower &&
            (hurst < intervals[i].upper || (last && hurst <= intervals[i].upper))) {
            return intervals[i].index;
        }
    }
    return -1;
}

void HurstClassScheme::validate() const {
    if (intervals.empty()) {
        throw std::invalid_argument("scheme: no class intervals");
    }
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (intervals[i].index != static_cast<int>(i)) {
            throw std::invalid_argument("scheme: class indices must be 0..K-1 in order");
        }
        if (!(intervals[i].lower < intervals[i].upper)) {
            throw std::invalid_argument("scheme: empty class interval");
        }
        if (i > 0 && std::abs(intervals[i].lower - intervals[i - 1].upper) > kBoundaryTol) {
            throw std::invalid_argument("scheme: class intervals must be contiguous and disjoint");
        }
    }
}

void HurstClassScheme::validate_hurst_range() const {
    validate();
    if (std::abs(intervals.front().lower - kRangeLow) > kBoundaryTol ||
        std::abs(intervals.back().upper - kRangeHigh) > kBoundaryTol) {
        throw std::invalid_argument("scheme: classes must cover [0.51, 0.99]");
    }
}

HurstClassScheme two_class_scheme() {
    return scheme_from_boundaries({0.51, 0.7, 0.99});
}

HurstClassScheme eleven_class_scheme() {
    // Integer thousandths keep boundaries like 0.975 exactly equal to the
    // same literal elsewhere.
    std::vector<double> bounds{0.51, 0.525};
    for (int i = 1; i <= 9; ++i) {
        bounds.push_back(static_cast<double>(525 + 50 * i) / 1000.0);
    }
    bounds.push_back(0.99);
    return scheme_from_boundaries(bounds);
}

HurstClassScheme scheme_from_boundaries(const std::vector<double>& boundaries) {
    if (boundaries.size() < 2) {
        throw std::invalid_argument("scheme: need at least two boundaries");
    }
    HurstClassScheme scheme;
    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
        scheme.intervals.push_back(
            {boundaries[i], boundaries[i + 1], static_cast<int>(i)});
    }
    scheme.validate();
    return scheme;
}

} // namespace mfts
