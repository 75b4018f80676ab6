#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mfts {

double mean(std::span<const double> values);

/// Sample standard deviation (n-1 denominator). Returns 0 for size < 2.
double sample_std(std::span<const double> values);

/// Median; for even length the average of the two central order statistics.
double median(std::span<const double> values);

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile (inverse CDF), p in (0, 1).
double normal_quantile(double p);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares of y on x. Needs at least two distinct x.
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

/// Orthonormal basis (thin Q of a QR factorisation) for polynomials of the
/// given degree evaluated on n equispaced points. Column-major, n rows.
std::vector<double> polynomial_basis(std::size_t n, int degree);

/// Sum of squared residuals of the least-squares polynomial fit, using a
/// basis from polynomial_basis for the same (n, degree).
double detrend_sse(std::span<const double> segment, std::span<const double> basis, int degree);

} // namespace mfts
