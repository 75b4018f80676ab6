#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mfts/forest.hpp"
#include "mfts/io.hpp"
#include "mfts/random.hpp"
#include "mfts/stats.hpp"

using namespace mfts;

namespace {

TrainingSet make_set(const std::vector<std::vector<double>>& rows,
                     const std::vector<double>& targets) {
    TrainingSet set;
    for (std::size_t i = 0; i < rows.size(); ++i) set.add_row(rows[i], targets[i]);
    return set;
}

std::vector<std::size_t> all_rows(const TrainingSet& set) {
    std::vector<std::size_t> rows(set.row_count);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return rows;
}

std::vector<int> all_features(const TrainingSet& set) {
    std::vector<int> features(set.col_count);
    for (std::size_t i = 0; i < features.size(); ++i) features[i] = static_cast<int>(i);
    return features;
}

double direct_sse(const std::vector<double>& y) {
    if (y.empty()) return 0.0;
    const double m = mean(y);
    double s = 0.0;
    for (double v : y) s += (v - m) * (v - m);
    return s;
}

struct EnumeratedSplit {
    int feature_index;
    double threshold;
    double sse;
};

// Exhaustive enumeration of every (feature, midpoint) pair with two-pass
// child SSEs, independent of the prefix-sum path inside best_split.
std::vector<EnumeratedSplit> enumerate_splits(const TrainingSet& set) {
    std::vector<EnumeratedSplit> splits;
    for (int f = 0; f < static_cast<int>(set.col_count); ++f) {
        std::vector<double> values;
        for (std::size_t r = 0; r < set.row_count; ++r) {
            values.push_back(set.feature(r, static_cast<std::size_t>(f)));
        }
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t i = 0; i + 1 < values.size(); ++i) {
            double threshold = 0.5 * (values[i] + values[i + 1]);
            if (threshold >= values[i + 1]) threshold = values[i];
            std::vector<double> left, right;
            for (std::size_t r = 0; r < set.row_count; ++r) {
                (set.feature(r, static_cast<std::size_t>(f)) <= threshold ? left : right)
                    .push_back(set.targets[r]);
            }
            splits.push_back({f, threshold, direct_sse(left) + direct_sse(right)});
        }
    }
    return splits;
}

} // namespace

TEST_CASE("no split exists when targets are all equal") {
    const TrainingSet set = make_set({{0.0}, {1.0}, {2.0}}, {5.0, 5.0, 5.0});
    CHECK_FALSE(best_split(set, all_rows(set), all_features(set)).has_value());
}

TEST_CASE("a perfectly separable pair splits at the midpoint") {
    const TrainingSet set = make_set({{0.0}, {1.0}}, {0.0, 1.0});
    const auto split = best_split(set, all_rows(set), all_features(set));
    REQUIRE(split.has_value());
    CHECK(split->feature_index == 0);
    CHECK(split->threshold == doctest::Approx(0.5));
}

TEST_CASE("best_split matches exhaustive enumeration on micro datasets") {
    Rng rng(4242);
    int checked_splits = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t rows = 2 + bounded_int(rng, 7);   // 2..8
        const std::size_t cols = 1 + bounded_int(rng, 3);   // 1..3
        std::vector<std::vector<double>> x(rows, std::vector<double>(cols));
        std::vector<double> y(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                // occasional duplicated values exercise the distinct-value rule
                x[r][c] = (bounded_int(rng, 4) == 0) ? 0.5 : uniform01(rng);
            }
            y[r] = (bounded_int(rng, 3) == 0) ? static_cast<double>(bounded_int(rng, 3))
                                              : uniform01(rng);
        }
        const TrainingSet set = make_set(x, y);
        const auto actual = best_split(set, all_rows(set), all_features(set));

        std::vector<double> targets = y;
        const double parent = direct_sse(targets);
        const auto splits = enumerate_splits(set);
        double min_sse = parent;
        for (const auto& s : splits) min_sse = std::min(min_sse, s.sse);
        const double tol = 1e-9 * std::max(1.0, parent);

        if (min_sse >= parent - tol) {
            // no split reduces the SSE beyond rounding: both must refuse or
            // the accepted split must be a rounding-level tie with the parent
            if (actual) {
                double actual_sse = -1.0;
                for (const auto& s : splits) {
                    if (s.feature_index == actual->feature_index &&
                        s.threshold == actual->threshold) {
                        actual_sse = s.sse;
                    }
                }
                CHECK(actual_sse <= parent + tol);
            }
            continue;
        }

        REQUIRE(actual.has_value());
        // the chosen split must attain the enumerated optimum
        double actual_sse = -1.0;
        for (const auto& s : splits) {
            if (s.feature_index == actual->feature_index && s.threshold == actual->threshold) {
                actual_sse = s.sse;
            }
        }
        REQUIRE(actual_sse >= 0.0); // the chosen pair appears in the enumeration
        CHECK(actual_sse <= min_sse + tol);

        // and when the optimum is unique, the choice is forced
        std::vector<EnumeratedSplit> tie_set;
        for (const auto& s : splits) {
            if (s.sse <= min_sse + tol) tie_set.push_back(s);
        }
        if (tie_set.size() == 1) {
            CHECK(actual->feature_index == tie_set[0].feature_index);
            CHECK(actual->threshold == tie_set[0].threshold);
            ++checked_splits;
        }
    }
    CHECK(checked_splits > 300);
}

TEST_CASE("exact ties resolve to the lowest feature, then the lowest threshold") {
    // Both features separate the two targets perfectly (child SSE exactly 0);
    // the lower feature index must win.
    const TrainingSet two_feature = make_set({{0.0, 5.0}, {1.0, 6.0}}, {0.0, 1.0});
    const auto by_feature = best_split(two_feature, all_rows(two_feature),
                                       all_features(two_feature));
    REQUIRE(by_feature.has_value());
    CHECK(by_feature->feature_index == 0);
    CHECK(by_feature->threshold == doctest::Approx(0.5));

    // Targets 0, 1, 0: thresholds 0.5 and 1.5 both leave an SSE of exactly
    // 0.5; the lower threshold must win.
    const TrainingSet by_threshold = make_set({{0.0}, {1.0}, {2.0}}, {0.0, 1.0, 0.0});
    const auto split = best_split(by_threshold, all_rows(by_threshold),
                                  all_features(by_threshold));
    REQUIRE(split.has_value());
    CHECK(split->feature_index == 0);
    CHECK(split->threshold == doctest::Approx(0.5));
}

TEST_CASE("a single row becomes a leaf with its target") {
    const TrainingSet set = make_set({{3.0, 1.0}}, {0.25});
    Rng rng(1);
    const auto tree = fit_tree(set, all_rows(set), 2, rng);
    CHECK(tree->is_leaf());
    CHECK(tree->prediction == 0.25);
    CHECK(tree->count == 1);
}

TEST_CASE("full-depth trees memorize distinct rows") {
    Rng rng(9);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        x.push_back({uniform01(rng), uniform01(rng), uniform01(rng)});
        y.push_back(uniform01(rng));
    }
    const TrainingSet set = make_set(x, y);
    Rng tree_rng(2);
    const auto tree = fit_tree(set, all_rows(set), static_cast<int>(set.col_count), tree_rng);
    for (std::size_t r = 0; r < set.row_count; ++r) {
        CHECK(tree_predict(*tree, set.row(r)) == set.targets[r]);
    }
}

TEST_CASE("indistinguishable rows form a mean leaf") {
    const TrainingSet set = make_set({{1.0, 2.0}, {1.0, 2.0}}, {0.0, 1.0});
    Rng rng(5);
    const auto tree = fit_tree(set, all_rows(set), 2, rng);
    CHECK(tree->is_leaf());
    CHECK(tree->prediction == doctest::Approx(0.5));
    CHECK(tree->count == 2);
}

TEST_CASE("forest predictions average the trees") {
    ForestModel model;
    model.feature_count = 1;
    auto leaf = [](double value) {
        auto node = std::make_unique<TreeNode>();
        node->prediction = value;
        node->count = 1;
        return node;
    };
    model.trees.push_back(leaf(1.0));
    model.trees.push_back(leaf(3.0));
    model.tree_count = 2;
    CHECK(model.predict(std::vector<double>{0.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(model.predict(std::vector<double>{0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("an ensemble of one without bootstrap equals a single tree") {
    Rng rng(12);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 30; ++i) {
        x.push_back({uniform01(rng), uniform01(rng)});
        y.push_back(x.back()[0] + 0.25 * uniform01(rng));
    }
    const TrainingSet set = make_set(x, y);

    ForestOptions options;
    options.mode = ForestMode::bagging;
    options.tree_count = 1;
    options.bootstrap = false;
    options.seed = 77;
    const ForestModel forest = fit_forest(set, options);

    Rng tree_rng(derive_seed(77, "tree", 0));
    const auto tree = fit_tree(set, all_rows(set), static_cast<int>(set.col_count), tree_rng);
    for (std::size_t r = 0; r < set.row_count; ++r) {
        CHECK(forest.predict(set.row(r)) == tree_predict(*tree, set.row(r)));
    }
}

TEST_CASE("constant targets yield constant predictions") {
    Rng rng(8);
    std::vector<std::vector<double>> x;
    for (int i = 0; i < 20; ++i) x.push_back({uniform01(rng), uniform01(rng)});
    const TrainingSet set = make_set(x, std::vector<double>(20, 3.0));
    for (ForestMode mode : {ForestMode::bagging, ForestMode::random_forest}) {
        ForestOptions options;
        options.mode = mode;
        options.tree_count = 25;
        options.seed = 5;
        const ForestModel model = fit_forest(set, options);
        CHECK(model.predict(std::vector<double>{0.4, 0.6}) == doctest::Approx(3.0));
    }
}

TEST_CASE("forests are deterministic in the seed") {
    Rng rng(21);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 25; ++i) {
        x.push_back({uniform01(rng), uniform01(rng), uniform01(rng)});
        y.push_back(uniform01(rng));
    }
    const TrainingSet set = make_set(x, y);
    ForestOptions options;
    options.tree_count = 12;
    options.seed = 1001;
    const ForestModel a = fit_forest(set, options);
    const ForestModel b = fit_forest(set, options);
    CHECK(forest_to_json(a) == forest_to_json(b));
    options.seed = 1002;
    const ForestModel c = fit_forest(set, options);
    CHECK(forest_to_json(a) != forest_to_json(c));
}

TEST_CASE("predictions stay within the training target range") {
    Rng rng(33);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 50; ++i) {
        x.push_back({uniform01(rng), uniform01(rng)});
        y.push_back(2.0 * uniform01(rng) - 0.5);
    }
    const TrainingSet set = make_set(x, y);
    ForestOptions options;
    options.tree_count = 30;
    options.seed = 2;
    const ForestModel model = fit_forest(set, options);
    const double lo = *std::min_element(y.begin(), y.end());
    const double hi = *std::max_element(y.begin(), y.end());
    for (int i = 0; i < 100; ++i) {
        const double p = model.predict(std::vector<double>{uniform01(rng), uniform01(rng)});
        CHECK(p >= lo);
        CHECK(p <= hi);
    }
}

TEST_CASE("prediction variance shrinks as the ensemble grows") {
    Rng rng(55);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 24; ++i) {
        x.push_back({uniform01(rng)});
        y.push_back(x.back()[0]);
    }
    const TrainingSet set = make_set(x, y);
    const std::vector<double> query{0.37};

    auto prediction_variance = [&](int trees) {
        std::vector<double> predictions;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            ForestOptions options;
            options.tree_count = trees;
            options.seed = 9000 + seed;
            predictions.push_back(fit_forest(set, options).predict(query));
        }
        const double s = sample_std(predictions);
        return s * s;
    };
    const double v1 = prediction_variance(1);
    const double v10 = prediction_variance(10);
    const double v100 = prediction_variance(100);
    CHECK(v1 > v10);
    CHECK(v10 > v100);
}

TEST_CASE("out-of-bag error is reported for bootstrap forests") {
    Rng rng(66);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        x.push_back({uniform01(rng), uniform01(rng)});
        y.push_back(x.back()[0]);
    }
    const TrainingSet set = make_set(x, y);
    ForestOptions options;
    options.tree_count = 50;
    options.seed = 4;
    const ForestModel model = fit_forest(set, options);
    CHECK(std::isfinite(model.oob_mse));
    CHECK(model.oob_mse >= 0.0);
}

TEST_CASE("class_score fixed points and clamping") {
    CHECK(class_score(3.0, 3) == 1.0);
    CHECK(class_score(3.5, 3) == doctest::Approx(0.5));
    CHECK(class_score(5.0, 3) == 0.0);
    CHECK(class_score(-2.0, 0) == 0.0);
    for (double m = -1.0; m <= 4.0; m += 0.1) {
        const double p = class_score(m, 2);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("predicted_class rounds and clamps") {
    CHECK(predicted_class(0.4, 11) == 0);
    CHECK(predicted_class(0.6, 11) == 1);
    CHECK(predicted_class(10.7, 11) == 10);
    CHECK(predicted_class(-3.0, 11) == 0);
    CHECK(predicted_class(25.0, 11) == 10);
}

TEST_CASE("fit_forest validates its inputs") {
    TrainingSet empty;
    ForestOptions options;
    CHECK_THROWS_AS(fit_forest(empty, options), std::invalid_argument);
    const TrainingSet set = make_set({{1.0}}, {1.0});
    options.tree_count = 0;
    CHECK_THROWS_AS(fit_forest(set, options), std::invalid_argument);
}
