#include "mfts/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfts {

double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

double median(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median: empty input");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / 1.4142135623730950488);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("normal_quantile: p must be in (0, 1)");
    }
    // Acklam's rational approximation, then one Halley refinement.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * 2.5066282746310002 * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("ols_fit: need two same-sized inputs");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) {
        throw std::invalid_argument("ols_fit: x values are all equal");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

std::vector<double> polynomial_basis(std::size_t n, int degree) {
    if (degree < 0 || n < static_cast<std::size_t>(degree) + 1) {
        throw std::invalid_argument("polynomial_basis: need n >= degree + 1");
    }
    const std::size_t k = static_cast<std::size_t>(degree) + 1;
    std::vector<double> q(n * k);
    // Vandermonde on x scaled to [-1, 1], orthonormalised by modified
    // Gram-Schmidt (two passes for stability).
    const double scale = (n > 1) ? 2.0 / static_cast<double>(n - 1) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) * scale - 1.0;
        double p = 1.0;
        for (std::size_t j = 0; j < k; ++j) {
            q[j * n + i] = p;
            p *= x;
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        double* col = &q[j * n];
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t l = 0; l < j; ++l) {
                const double* prev = &q[l * n];
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += col[i] * prev[i];
                for (std::size_t i = 0; i < n; ++i) col[i] -= dot * prev[i];
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += col[i] * col[i];
        norm = std::sqrt(norm);
        if (norm <= 0.0) {
            throw std::runtime_error("polynomial_basis: degenerate basis");
        }
        for (std::size_t i = 0; i < n; ++i) col[i] /= norm;
    }
    return q;
}

double detrend_sse(std::span<const double> segment, std::span<const double> basis, int degree) {
    const std::size_t n = segment.size();
    const std::size_t k = static_cast<std::size_t>(degree) + 1;
    if (basis.size() != n * k) {
        throw std::invalid_argument("detrend_sse: basis does not match segment");
    }
    double coef[16];
    if (k > 16) throw std::invalid_argument("detrend_sse: degree too large");
    for (std::size_t j = 0; j < k; ++j) {
        const double* col = &basis[j * n];
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += col[i] * segment[i];
        coef[j] = dot;
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = 0.0;
        for (std::size_t j = 0; j < k; ++j) fit += coef[j] * basis[j * n + i];
        const double r = segment[i] - fit;
        sse += r * r;
    }
    return sse;
}

} // namespace mfts
