#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "mfts/stats.hpp"

using namespace mfts;

TEST_CASE("normal quantile matches tabulated values") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normal_quantile(0.995) == doctest::Approx(2.575829).epsilon(1e-5));
    // round trip through the cdf
    for (double x : {-3.0, -0.7, 0.0, 1.3, 4.0}) {
        CHECK(normal_quantile(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-9));
    }
    CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("median handles even and odd lengths") {
    std::vector<double> odd{3.0, 1.0, 2.0};
    CHECK(median(odd) == 2.0);
    std::vector<double> even{4.0, 1.0, 3.0, 2.0};
    CHECK(median(even) == 2.5);
    CHECK_THROWS_AS(median(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("sample std uses the n-1 denominator") {
    std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    CHECK(sample_std(v) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-12));
    CHECK(sample_std(std::vector<double>{7.0}) == 0.0);
}

TEST_CASE("ols recovers an exact line") {
    std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<double> y;
    for (double xi : x) y.push_back(2.5 * xi - 1.0);
    const LinearFit fit = ols_fit(x, y);
    CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(ols_fit(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("detrend_sse removes polynomials exactly") {
    const std::size_t n = 12;
    std::vector<double> seg(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i);
        seg[i] = 1.0 - 0.5 * x + 0.25 * x * x;
    }
    const auto basis = polynomial_basis(n, 2);
    CHECK(detrend_sse(seg, basis, 2) == doctest::Approx(0.0).epsilon(1e-15));
}
