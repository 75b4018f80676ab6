#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mfts/cascade.hpp"
#include "mfts/mfdfa.hpp"
#include "mfts/scheme.hpp"

namespace mfts {

/// Monte-Carlo error statistics of the Hurst estimator for one series
/// length. `delta` is the mean correction E[H - H^] added to estimates and
/// `s` the standard deviation of the estimation error.
struct CalibrationEntry {
    double delta = 0.0;
    double s = 0.0;
    int trials = 0;
    std::vector<double> h_grid;
    bool degenerate = false;        // s collapsed to (near) zero
    std::vector<double> per_h_bias; // diagnostic only, one per h_grid value
};

struct CalibrationTable {
    std::map<std::uint64_t, CalibrationEntry> entries; // key: series length N
    std::string config_hash;

    /// Entry for an exact length; lookups never interpolate.
    const CalibrationEntry& at(std::uint64_t length) const;
    bool contains(std::uint64_t length) const { return entries.count(length) > 0; }
};

/// Fingerprint of the estimator configuration stored with the table.
std::string mfdfa_config_hash(const MfdfaConfig& config);

/// Grid of true Hurst values used for calibration: 0.525 to 0.975 step 0.05.
std::vector<double> default_calibration_h_grid();

struct CalibrationOptions {
    std::vector<std::uint64_t> lengths;
    std::vector<double> h_grid = default_calibration_h_grid();
    int trials_per_cell = 200;
    std::uint64_t seed = 0;
    int poly_order = 2;
    int threads = 0;
    /// Test hook: replaces the MFDFA estimator. Receives the generated
    /// series and its true H; the default estimates h(2).
    std::function<double(const TimeSeries&, double)> estimator;
};

/// Tabulates delta(N) and S(N) by generating `trials_per_cell` cascades per
/// (length, H) cell and pooling the estimation errors per length.
/// Deterministic for a given seed, independent of thread count.
CalibrationTable build_calibration(const CalibrationOptions& options);

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double center = 0.0;
    double alpha_level = 0.0;
    double t_quantile = 0.0;
};

/// Two-sided normal confidence interval for the true H:
///   center = H^ + delta(N), half-width = t_alpha * S(N).
ConfidenceInterval confidence_interval(double h_hat, std::uint64_t length,
                                       double alpha_level, const CalibrationTable& table);

struct IntervalClassification {
    std::vector<double> class_mass;  // one entry per class
    double tail_low = 0.0;           // mass below the first class
    double tail_high = 0.0;          // mass above the last class
    int predicted_class = 0;
    ConfidenceInterval interval;
};

/// Models the true H as Normal(H^ + delta(N), S(N)) and assigns each class
/// the probability mass of its interval. Predicted class is the argmax
/// (ties resolve to the lower index).
IntervalClassification classify_by_interval(double h_hat, std::uint64_t length,
                                            double alpha_level, const CalibrationTable& table,
                                            const HurstClassScheme& scheme);

} // namespace mfts
