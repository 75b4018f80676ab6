#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mfts/cascade.hpp"

namespace mfts {

/// Configuration of the multifractal detrended fluctuation analysis.
struct MfdfaConfig {
    int poly_order = 2;
    std::vector<int> tau_grid;                  // segment lengths, increasing
    std::vector<double> q_grid;                 // moment orders, q > 0
    bool use_backward_segments = true;

    /// Default grids for a series of the given length: 16 log-spaced
    /// integer scales from max(8, m+2) to length/4, and the q grid
    /// 0.1, 0.5, 1, ..., 5.
    static MfdfaConfig for_length(std::size_t length, int poly_order = 2);

    void validate(std::size_t series_length) const;
};

std::vector<int> default_tau_grid(std::size_t length, int poly_order, int count = 16);
std::vector<double> default_q_grid();

/// Per-scale fluctuation functions F_q(tau).
struct FluctuationTable {
    std::vector<int> tau_grid;
    std::vector<double> q_grid;
    std::vector<std::vector<double>> values;    // [q][tau], all > 0
    std::vector<int> segment_counts;            // per tau: floor(L/tau), doubled when backward
    double floored_fraction = 0.0;              // share of segments hit by the F^2 floor
    bool degenerate = false;                    // more than half the segments floored
};

struct MfdfaResult {
    std::vector<double> q_grid;
    std::vector<double> h_of_q;                 // slope of log F_q vs log tau
    std::vector<double> fit_r2;
    std::vector<int> tau_grid;
    std::vector<std::vector<double>> fluctuation;
    std::vector<double> low_confidence_q;       // fits with R^2 < 0.8
    bool degenerate_input = false;

    /// h at a grid value of q (1e-9 match tolerance).
    double h(double q) const;
    /// The Hurst estimate H^ = h(2).
    double hurst() const { return h(2.0); }
};

/// Cumulative sum of the mean-subtracted series; the last element is 0.
std::vector<double> profile(const TimeSeries& series);

/// Mean squared residual of a least-squares degree-m polynomial fit over
/// the segment. Requires segment length >= m + 2.
double segment_fluctuation(std::span<const double> segment, int poly_order);

/// F_q(tau) over the config grids: the profile is split into floor(L/tau)
/// segments from the start (plus the same count from the end when backward
/// segments are on), F^2 is computed per segment and aggregated by the
/// order-q power mean. F^2 values below 1e-300 are floored.
FluctuationTable fluctuation_function(const TimeSeries& series, const MfdfaConfig& config);

/// Ordinary least squares of log F_q on log tau per q.
MfdfaResult fit_h_of_q(const FluctuationTable& table, const MfdfaConfig& config);

/// fluctuation_function + fit_h_of_q.
MfdfaResult analyze(const TimeSeries& series, const MfdfaConfig& config);

/// The Hurst exponent estimate h(2) for the series.
double estimate_hurst(const TimeSeries& series, const MfdfaConfig& config);

} // namespace mfts
