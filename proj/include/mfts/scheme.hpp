#pragma once

#include <vector>

namespace mfts {

struct ClassInterval {
    double lower = 0.0;
    double upper = 0.0;
    int index = 0;
};

/// Ordered partition of the Hurst range [0.51, 0.99] into classes. All
/// intervals are closed-open except the last, which includes its upper end.
struct HurstClassScheme {
    std::vector<ClassInterval> intervals;

    int class_count() const { return static_cast<int>(intervals.size()); }
    /// Class index containing H, or -1 when H is outside the scheme.
    int class_of(double hurst) const;
    /// Ordering, contiguity and index checks.
    void validate() const;
    /// validate(), plus the experiment requirement of covering [0.51, 0.99].
    void validate_hurst_range() const;
};

/// Two classes: [0.51, 0.7) and [0.7, 0.99].
HurstClassScheme two_class_scheme();

/// Eleven classes: [0.51, 0.525), [0.525, 0.575), ..., [0.975, 0.99].
HurstClassScheme eleven_class_scheme();

/// Builds a scheme from consecutive boundaries (first 0.51, last 0.99).
HurstClassScheme scheme_from_boundaries(const std::vector<double>& boundaries);

} // namespace mfts
