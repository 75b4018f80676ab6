#include "mfts/mfdfa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mfts/stats.hpp"

namespace mfts {

namespace {
constexpr double kFluctuationFloor = 1e-300;
constexpr double kQMatchTol = 1e-9;
constexpr double kLowConfidenceR2 = 0.8;
} // namespace

std::vector<int> default_tau_grid(std::size_t length, int poly_order, int count) {
    const int lo = std::max(8, poly_order + 2);
    const int hi = static_cast<int>(length / 4);
    if (hi < lo) {
        throw std::invalid_argument("default_tau_grid: series too short for the scale range");
    }
    std::vector<int> grid;
    const double llo = std::log(static_cast<double>(lo));
    const double lhi = std::log(static_cast<double>(hi));
    for (int i = 0; i < count; ++i) {
        const double t = (count > 1) ? static_cast<double>(i) / (count - 1) : 0.0;
        const int tau = static_cast<int>(std::lround(std::exp(llo + t * (lhi - llo))));
        if (grid.empty() || tau > grid.back()) {
            grid.push_back(tau);
        }
    }
    return grid;
}

std::vector<double> default_q_grid() {
    return {0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
}

MfdfaConfig MfdfaConfig::for_length(std::size_t length, int poly_order) {
    MfdfaConfig config;
    config.poly_order = poly_order;
    config.tau_grid = default_tau_grid(length, poly_order);
    config.q_grid = default_q_grid();
    config.validate(length);
    return config;
}

void MfdfaConfig::validate(std::size_t series_length) const {
    if (poly_order < 0) {
        throw std::invalid_argument("mfdfa: poly_order must be >= 0");
    }
    if (tau_grid.size() < 8) {
        throw std::invalid_argument("mfdfa: tau grid needs at least 8 distinct scales");
    }
    int prev = 0;
    for (int tau : tau_grid) {
        if (tau < poly_order + 2) {
            throw std::invalid_argument("mfdfa: every tau must be >= poly_order + 2");
        }
        if (tau <= prev) {
            throw std::invalid_argument("mfdfa: tau grid must be strictly increasing");
        }
        prev = tau;
    }
    if (series_length > 0 && static_cast<std::size_t>(tau_grid.back()) > series_length / 4) {
        throw std::invalid_argument("mfdfa: max tau exceeds length/4");
    }
    if (q_grid.empty()) {
        throw std::invalid_argument("mfdfa: q grid is empty");
    }
    for (double q : q_grid) {
        if (!(q > 0.0)) {
            throw std::invalid_argument("mfdfa: q values must be > 0 (q = 0 is undefined)");
        }
    }
    // the feature set reads h at these orders
    for (double required : {0.1, 1.0, 2.0, 5.0}) {
        bool found = false;
        for (double q : q_grid) {
            if (std::abs(q - required) < kQMatchTol) found = true;
        }
        if (!found) {
            throw std::invalid_argument("mfdfa: q grid must contain 0.1, 1, 2 and 5");
        }
    }
}

std::vector<double> profile(const TimeSeries& series) {
    if (series.size() < 2) {
        throw std::invalid_argument("profile: need at least two samples");
    }
    const double m = mean(series);
    // Remove the rounding residue of the mean so the profile ends at zero.
    double residue = 0.0;
    for (double v : series) residue += v - m;
    residue /= static_cast<double>(series.size());

    std::vector<double> y(series.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        acc += series[i] - m - residue;
        y[i] = acc;
    }
    return y;
}

double segment_fluctuation(std::span<const double> segment, int poly_order) {
    if (segment.size() < static_cast<std::size_t>(poly_order) + 2) {
        throw std::invalid_argument("segment_fluctuation: segment shorter than poly_order + 2");
    }
    const auto basis = polynomial_basis(segment.size(), poly_order);
    const double sse = detrend_sse(segment, basis, poly_order);
    return std::max(sse, 0.0) / static_cast<double>(segment.size());
}

FluctuationTable fluctuation_function(const TimeSeries& series, const MfdfaConfig& config) {
    config.validate(series.size());
    if (series.size() < 4 * static_cast<std::size_t>(config.tau_grid.front())) {
        throw std::invalid_argument("fluctuation_function: series shorter than 4 * min(tau)");
    }
    const auto y = profile(series);
    const std::size_t length = y.size();

    FluctuationTable table;
    table.tau_grid = config.tau_grid;
    table.q_grid = config.q_grid;
    table.values.assign(config.q_grid.size(), std::vector<double>(config.tau_grid.size(), 0.0));

    std::size_t total_segments = 0;
    std::size_t floored_segments = 0;
    std::vector<double> f2;
    for (std::size_t ti = 0; ti < config.tau_grid.size(); ++ti) {
        const std::size_t tau = static_cast<std::size_t>(config.tau_grid[ti]);
        const std::size_t count = length / tau;
        const auto basis = polynomial_basis(tau, config.poly_order);

        f2.clear();
        f2.reserve(config.use_backward_segments ? 2 * count : count);
        for (std::size_t k = 0; k < count; ++k) {
            const double sse = detrend_sse({y.data() + k * tau, tau}, basis, config.poly_order);
            f2.push_back(std::max(sse, 0.0) / static_cast<double>(tau));
        }
        if (config.use_backward_segments) {
            const std::size_t shift = length - count * tau;
            for (std::size_t k = 0; k < count; ++k) {
                const double sse =
                    detrend_sse({y.data() + shift + k * tau, tau}, basis, config.poly_order);
                f2.push_back(std::max(sse, 0.0) / static_cast<double>(tau));
            }
        }

        table.segment_counts.push_back(static_cast<int>(f2.size()));
        double f2_max = kFluctuationFloor;
        for (double& v : f2) {
            if (v < kFluctuationFloor) {
                v = kFluctuationFloor;
                ++floored_segments;
            }
            f2_max = std::max(f2_max, v);
        }
        total_segments += f2.size();

        // Power mean with the largest F^2 factored out, so large q never
        // overflows and the result stays strictly positive.
        const std::size_t ns = f2.size();
        std::vector<double> log_ratio(ns);
        for (std::size_t k = 0; k < ns; ++k) {
            log_ratio[k] = std::log(f2[k] / f2_max);
        }
        for (std::size_t qi = 0; qi < config.q_grid.size(); ++qi) {
            const double q = config.q_grid[qi];
            double acc = 0.0;
            for (double lr : log_ratio) {
                acc += std::exp(0.5 * q * lr);
            }
            const double log_fq =
                0.5 * std::log(f2_max) + (std::log(acc) - std::log(static_cast<double>(ns))) / q;
            table.values[qi][ti] = std::exp(log_fq);
        }
    }

    table.floored_fraction =
        total_segments ? static_cast<double>(floored_segments) / total_segments : 0.0;
    table.degenerate = table.floored_fraction > 0.5;
    return table;
}

MfdfaResult fit_h_of_q(const FluctuationTable& table, const MfdfaConfig& config) {
    if (table.tau_grid.size() < 8) {
        throw std::invalid_argument("fit_h_of_q: need at least 8 scales");
    }
    MfdfaResult result;
    result.q_grid = table.q_grid;
    result.tau_grid = table.tau_grid;
    result.fluctuation = table.values;
    result.degenerate_input = table.degenerate;

    std::vector<double> log_tau(table.tau_grid.size());
    for (std::size_t i = 0; i < table.tau_grid.size(); ++i) {
        log_tau[i] = std::log(static_cast<double>(table.tau_grid[i]));
    }
    std::vector<double> log_f(table.tau_grid.size());
    for (std::size_t qi = 0; qi < table.q_grid.size(); ++qi) {
        for (std::size_t ti = 0; ti < table.tau_grid.size(); ++ti) {
            const double f = table.values[qi][ti];
            if (!(f > 0.0) || !std::isfinite(f)) {
                throw std::invalid_argument("fit_h_of_q: fluctuation values must be finite and positive");
            }
            log_f[ti] = std::log(f);
        }
        const LinearFit fit = ols_fit(log_tau, log_f);
        result.h_of_q.push_back(fit.slope);
        result.fit_r2.push_back(fit.r2);
        if (fit.r2 < kLowConfidenceR2) {
            result.low_confidence_q.push_back(table.q_grid[qi]);
        }
    }
    (void)config;
    return result;
}

MfdfaResult analyze(const TimeSeries& series, const MfdfaConfig& config) {
    return fit_h_of_q(fluctuation_function(series, config), config);
}

double estimate_hurst(const TimeSeries& series, const MfdfaConfig& config) {
    return analyze(series, config).hurst();
}

double MfdfaResult::h(double q) const {
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        if (std::abs(q_grid[i] - q) < kQMatchTol) {
            return h_of_q[i];
        }
    }
    throw std::invalid_argument("MfdfaResult::h: q not on the analysis grid");
}

} // namespace mfts
