#include "mfts/calibration.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mfts/parallel.hpp"
#include "mfts/random.hpp"
#include "mfts/stats.hpp"

namespace mfts {

namespace {

int log2_exact(std::uint64_t n) {
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("calibration: series lengths must be powers of two");
    }
    int k = 0;
    while ((1ULL << k) < n) ++k;
    return k;
}

} // namespace

const CalibrationEntry& CalibrationTable::at(std::uint64_t length) const {
    auto it = entries.find(length);
    if (it == entries.end()) {
        throw std::invalid_argument("calibration: no entry for length " + std::to_string(length) +
                                    " (lookups never interpolate)");
    }
    return it->second;
}

std::string mfdfa_config_hash(const MfdfaConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ULL;
    };
    mix(static_cast<std::uint64_t>(config.poly_order));
    mix(config.use_backward_segments ? 1 : 0);
    for (int tau : config.tau_grid) mix(static_cast<std::uint64_t>(tau));
    for (double q : config.q_grid) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(q));
        __builtin_memcpy(&bits, &q, sizeof(bits));
        mix(bits);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<double> default_calibration_h_grid() {
    std::vector<double> grid;
    for (int i = 0; i < 10; ++i) {
        grid.push_back(static_cast<double>(525 + 50 * i) / 1000.0);
    }
    return grid;
}

CalibrationTable build_calibration(const CalibrationOptions& options) {
    if (options.lengths.empty() || options.h_grid.empty()) {
        throw std::invalid_argument("calibration: lengths and h grid must be non-empty");
    }
    if (options.trials_per_cell < 100) {
        throw std::invalid_argument("calibration: need at least 100 trials per cell");
    }
    for (double h : options.h_grid) {
        if (!(h > 0.5 && h < 1.0)) {
            throw std::invalid_argument("calibration: H grid values must be in (0.5, 1)");
        }
    }

    CalibrationTable table;
    for (std::uint64_t length : options.lengths) {
        const int n = log2_exact(length);
        const MfdfaConfig config = MfdfaConfig::for_length(length, options.poly_order);
        if (table.config_hash.empty()) {
            table.config_hash = mfdfa_config_hash(config);
        }

        const std::size_t cells = options.h_grid.size();
        const std::size_t trials = static_cast<std::size_t>(options.trials_per_cell);
        std::vector<double> errors(cells * trials);
        parallel_for(cells * trials, options.threads, [&](std::size_t idx) {
            const std::size_t cell = idx / trials;
            const std::size_t trial = idx % trials;
            const double h_true = options.h_grid[cell];
            CascadeParams params;
            params.n = n;
            params.alpha = params.beta = alpha_for_hurst(h_true);
            params.seed = derive_seed(options.seed, "calibration", length * 1315423911ULL + cell, trial);
            const TimeSeries series = generate_cascade(params);
            const double estimate = options.estimator
                                        ? options.estimator(series, h_true)
                                        : estimate_hurst(series, config);
            errors[idx] = h_true - estimate; // mean of this is the bias correction
        });

        CalibrationEntry entry;
        entry.trials = options.trials_per_cell;
        entry.h_grid = options.h_grid;
        entry.delta = mean(errors);
        entry.s = sample_std(errors);
        entry.degenerate = !(entry.s > 1e-12);
        for (std::size_t cell = 0; cell < cells; ++cell) {
            std::span<const double> cell_errors(errors.data() + cell * trials, trials);
            entry.per_h_bias.push_back(-mean(cell_errors));
        }
        table.entries[length] = entry;
    }
    return table;
}

ConfidenceInterval confidence_interval(double h_hat, std::uint64_t length,
                                       double alpha_level, const CalibrationTable& table) {
    if (!(alpha_level > 0.0 && alpha_level < 1.0)) {
        throw std::invalid_argument("confidence_interval: alpha must be in (0, 1)");
    }
    const CalibrationEntry& entry = table.at(length);
    ConfidenceInterval ci;
    ci.alpha_level = alpha_level;
    ci.t_quantile = normal_quantile(1.0 - alpha_level / 2.0);
    ci.center = h_hat + entry.delta;
    ci.lower = ci.center - ci.t_quantile * entry.s;
    ci.upper = ci.center + ci.t_quantile * entry.s;
    return ci;
}

IntervalClassification classify_by_interval(double h_hat, std::uint64_t length,
                                            double alpha_level, const CalibrationTable& table,
                                            const HurstClassScheme& scheme) {
    scheme.validate();
    const CalibrationEntry& entry = table.at(length);
    IntervalClassification out;
    out.interval = confidence_interval(h_hat, length, alpha_level, table);
    const double center = out.interval.center;

    if (entry.s > 0.0) {
        for (const ClassInterval& ci : scheme.intervals) {
            const double mass = normal_cdf((ci.upper - center) / entry.s) -
                                normal_cdf((ci.lower - center) / entry.s);
            out.class_mass.push_back(mass);
        }
        out.tail_low = normal_cdf((scheme.intervals.front().lower - center) / entry.s);
        out.tail_high = 1.0 - normal_cdf((scheme.intervals.back().upper - center) / entry.s);
    } else {
        // Degenerate spread: all mass at the center.
        out.class_mass.assign(scheme.intervals.size(), 0.0);
        const int k = scheme.class_of(center);
        if (k >= 0) {
            out.class_mass[static_cast<std::size_t>(k)] = 1.0;
        } else if (center < scheme.intervals.front().lower) {
            out.tail_low = 1.0;
        } else {
            out.tail_high = 1.0;
        }
    }

    out.predicted_class = 0;
    for (std::size_t i = 1; i < out.class_mass.size(); ++i) {
        if (out.class_mass[i] > out.class_mass[out.predicted_class]) {
            out.predicted_class = static_cast<int>(i);
        }
    }
    return out;
}

} // namespace mfts
