#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "mfts/cascade.hpp"
#include "mfts/mfdfa.hpp"
#include "mfts/random.hpp"

using namespace mfts;

namespace {

TimeSeries uniform_series(std::size_t length, std::uint64_t seed) {
    Rng rng(seed);
    TimeSeries s(length);
    for (double& v : s) v = uniform01(rng);
    return s;
}

} // namespace

TEST_CASE("profile of a constant series is zero") {
    const auto y = profile(TimeSeries{3.0, 3.0, 3.0, 3.0});
    for (double v : y) CHECK(v == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("profile accumulates mean-subtracted values") {
    const auto y = profile(TimeSeries{1.0, 2.0, 3.0});
    REQUIRE(y.size() == 3);
    CHECK(y[0] == doctest::Approx(-1.0));
    CHECK(y[1] == doctest::Approx(-1.0));
    CHECK(y[2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("profile always ends at zero") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto y = profile(uniform_series(777, seed));
        CHECK(std::abs(y.back()) < 1e-9);
    }
    CHECK_THROWS_AS(profile(TimeSeries{}), std::invalid_argument);
    CHECK_THROWS_AS(profile(TimeSeries{1.0}), std::invalid_argument);
}

TEST_CASE("segment fluctuation of exact polynomials is zero") {
    TimeSeries quad(16);
    for (std::size_t i = 0; i < quad.size(); ++i) {
        const double x = static_cast<double>(i);
        quad[i] = 2.0 + 0.3 * x - 0.05 * x * x;
    }
    CHECK(segment_fluctuation(quad, 2) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(segment_fluctuation(TimeSeries{0.0, 1.0, 2.0, 3.0}, 1) ==
          doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("segment fluctuation of [0,1,0] with constant detrend is 2/9") {
    CHECK(segment_fluctuation(TimeSeries{0.0, 1.0, 0.0}, 0) ==
          doctest::Approx(2.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("segment fluctuation rejects segments shorter than m+2") {
    CHECK_THROWS_AS(segment_fluctuation(TimeSeries{1.0, 2.0, 3.0}, 2), std::invalid_argument);
}

TEST_CASE("default tau grid spans max(8, m+2) to length/4") {
    const auto grid = default_tau_grid(512, 2);
    REQUIRE(grid.size() >= 8);
    CHECK(grid.front() == 8);
    CHECK(grid.back() == 128);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("config validation rejects bad grids") {
    MfdfaConfig config = MfdfaConfig::for_length(512);
    config.q_grid.push_back(0.0);
    CHECK_THROWS_AS(config.validate(512), std::invalid_argument);
    config = MfdfaConfig::for_length(512);
    config.tau_grid[3] = config.tau_grid[2];
    CHECK_THROWS_AS(config.validate(512), std::invalid_argument);
    config = MfdfaConfig::for_length(512);
    config.tau_grid.back() = 200; // above length/4
    CHECK_THROWS_AS(config.validate(512), std::invalid_argument);
    config = MfdfaConfig::for_length(512);
    CHECK_THROWS_AS(fluctuation_function(uniform_series(64, 1), config), std::invalid_argument);
}

TEST_CASE("identical segments give the same F_q for every q") {
    // A period-8 pattern: the mean-subtracted profile is periodic, so all
    // segments at tau = 8 are identical and the power mean is flat in q.
    const std::size_t length = 256;
    TimeSeries s(length);
    for (std::size_t i = 0; i < length; ++i) {
        s[i] = static_cast<double>(i % 8) + ((i % 8 == 3) ? 2.5 : 0.0);
    }
    const MfdfaConfig config = MfdfaConfig::for_length(length);
    const FluctuationTable table = fluctuation_function(s, config);
    REQUIRE(table.tau_grid.front() == 8);
    const double reference = table.values[0][0];
    CHECK(reference > 0.0);
    for (std::size_t qi = 1; qi < table.q_grid.size(); ++qi) {
        CHECK(table.values[qi][0] == doctest::Approx(reference).epsilon(1e-12));
    }
}

TEST_CASE("segment counts are floor(L/tau), doubled with backward segments") {
    const TimeSeries s = uniform_series(300, 4);
    MfdfaConfig config = MfdfaConfig::for_length(300);
    FluctuationTable table = fluctuation_function(s, config);
    REQUIRE(table.segment_counts.size() == table.tau_grid.size());
    for (std::size_t i = 0; i < table.tau_grid.size(); ++i) {
        CHECK(table.segment_counts[i] ==
              2 * static_cast<int>(300 / static_cast<std::size_t>(table.tau_grid[i])));
    }
    config.use_backward_segments = false;
    table = fluctuation_function(s, config);
    for (std::size_t i = 0; i < table.tau_grid.size(); ++i) {
        CHECK(table.segment_counts[i] ==
              static_cast<int>(300 / static_cast<std::size_t>(table.tau_grid[i])));
    }
}

TEST_CASE("power mean is non-decreasing in q") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const TimeSeries s = uniform_series(512, seed);
        const FluctuationTable table = fluctuation_function(s, MfdfaConfig::for_length(512));
        for (std::size_t ti = 0; ti < table.tau_grid.size(); ++ti) {
            for (std::size_t qi = 1; qi < table.q_grid.size(); ++qi) {
                CHECK(table.values[qi][ti] >= table.values[qi - 1][ti] * (1.0 - 1e-12));
            }
        }
    }
}

TEST_CASE("an exact power law is fitted exactly") {
    MfdfaConfig config = MfdfaConfig::for_length(512);
    FluctuationTable table;
    table.tau_grid = config.tau_grid;
    table.q_grid = config.q_grid;
    table.values.assign(config.q_grid.size(), {});
    for (std::size_t qi = 0; qi < config.q_grid.size(); ++qi) {
        for (int tau : config.tau_grid) {
            table.values[qi].push_back(std::pow(static_cast<double>(tau), 0.7));
        }
    }
    const MfdfaResult result = fit_h_of_q(table, config);
    for (std::size_t qi = 0; qi < result.q_grid.size(); ++qi) {
        CHECK(result.h_of_q[qi] == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(result.fit_r2[qi] == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(result.low_confidence_q.empty());
    CHECK(result.hurst() == doctest::Approx(0.7).epsilon(1e-12));
    // a monofractal h(q) is constant in q
    CHECK(result.h(0.1) == doctest::Approx(result.h(5.0)).epsilon(1e-12));
}

TEST_CASE("a multiplicative constant does not change the slope") {
    MfdfaConfig config = MfdfaConfig::for_length(512);
    FluctuationTable table;
    table.tau_grid = config.tau_grid;
    table.q_grid = {2.0};
    // fit_h_of_q needs the config's q grid only for sizes; use a 1-q table
    MfdfaConfig narrow = config;
    narrow.q_grid = {2.0};
    table.values.assign(1, {});
    for (int tau : config.tau_grid) {
        table.values[0].push_back(42.0 * std::pow(static_cast<double>(tau), 0.9));
    }
    const MfdfaResult result = fit_h_of_q(table, narrow);
    CHECK(result.h_of_q[0] == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("h(q) is invariant under rescaling the series") {
    const std::vector<double> factors{1e-6, 3.7, 1e6};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const TimeSeries base = uniform_series(512, seed + 100);
        const MfdfaConfig config = MfdfaConfig::for_length(512);
        const MfdfaResult reference = analyze(base, config);
        for (double c : factors) {
            TimeSeries scaled = base;
            for (double& v : scaled) v *= c;
            const MfdfaResult result = analyze(scaled, config);
            for (std::size_t qi = 0; qi < reference.q_grid.size(); ++qi) {
                CHECK(std::abs(result.h_of_q[qi] - reference.h_of_q[qi]) < 1e-9);
            }
        }
    }
}

TEST_CASE("uniform noise has a Hurst estimate near one half") {
    double sum = 0.0;
    const int trials = 200;
    const MfdfaConfig config = MfdfaConfig::for_length(4096);
    for (int i = 0; i < trials; ++i) {
        sum += estimate_hurst(uniform_series(4096, 9000 + static_cast<std::uint64_t>(i)), config);
    }
    const double mean = sum / trials;
    CHECK(std::abs(mean - 0.5) < 0.08);
}

TEST_CASE("cascades are more multifractal at small alpha") {
    // h(0.1) - h(5) should be positive for nearly every cascade with alpha <= 3
    const MfdfaConfig config = MfdfaConfig::for_length(1024);
    int positive = 0;
    int total = 0;
    for (double alpha : {0.3, 1.0, 3.0}) {
        for (int i = 0; i < 20; ++i) {
            CascadeParams params;
            params.n = 10;
            params.alpha = params.beta = alpha;
            params.seed = derive_seed(55, "mf-ordering", static_cast<std::uint64_t>(i),
                                      static_cast<std::uint64_t>(alpha * 10));
            const MfdfaResult result = analyze(generate_cascade(params), config);
            CHECK(result.h(0.1) >= result.h(5.0) - 1e-9);
            if (result.h(0.1) - result.h(5.0) > 0.0) ++positive;
            ++total;
        }
    }
    CHECK(positive >= static_cast<int>(0.95 * total));
}

TEST_CASE("a unit-shape cascade estimates near its design exponent") {
    // alpha = 1 corresponds to h(2) = (1 + log2(3/2)) / 2 ~ 0.7925
    const MfdfaConfig config = MfdfaConfig::for_length(4096);
    double sum = 0.0;
    const int trials = 60;
    for (int i = 0; i < trials; ++i) {
        CascadeParams params;
        params.n = 12;
        params.alpha = params.beta = 1.0;
        params.seed = derive_seed(17, "alpha-one", static_cast<std::uint64_t>(i));
        sum += estimate_hurst(generate_cascade(params), config);
    }
    CHECK(std::abs(sum / trials - 0.7925) < 0.05);
}

TEST_CASE("degenerate input is reported when most segments are floored") {
    const TimeSeries flat(256, 0.125);
    const MfdfaResult result = analyze(flat, MfdfaConfig::for_length(256));
    CHECK(result.degenerate_input);
}
