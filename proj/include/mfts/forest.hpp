#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mfts/random.hpp"

namespace mfts {

/// Row-major feature matrix with real-valued targets. For classification
/// tasks the targets are class indices 0..K-1 stored as doubles.
struct TrainingSet {
    std::vector<double> features;
    std::vector<double> targets;
    std::size_t row_count = 0;
    std::size_t col_count = 0;

    void add_row(std::span<const double> row, double target);
    double feature(std::size_t row, std::size_t col) const {
        return features[row * col_count + col];
    }
    std::span<const double> row(std::size_t r) const {
        return {features.data() + r * col_count, col_count};
    }
};

/// Binary regression tree node; feature_index < 0 marks a leaf.
struct TreeNode {
    int feature_index = -1;
    double threshold = 0.0;
    double prediction = 0.0;  // leaf: mean target of its rows
    int count = 0;            // leaf: number of training rows
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;

    bool is_leaf() const { return feature_index < 0; }
};

struct SplitChoice {
    int feature_index = 0;
    double threshold = 0.0;
};

/// Best split over the candidate features: minimizes the summed child SSE,
/// with thresholds at midpoints between consecutive distinct values.
/// Ties resolve to the lowest feature index, then the lowest threshold.
/// Returns nothing when no split reduces the SSE.
std::optional<SplitChoice> best_split(const TrainingSet& data,
                                      std::span<const std::size_t> rows,
                                      std::span<const int> candidate_features);

/// Full-depth CART regression tree: recursive splitting until leaves are
/// pure or no valid split exists; no pruning, minimum leaf size 1. At each
/// node `features_per_split` features are drawn without replacement.
std::unique_ptr<TreeNode> fit_tree(const TrainingSet& data,
                                   std::vector<std::size_t> rows,
                                   int features_per_split, Rng& rng);

double tree_predict(const TreeNode& node, std::span<const double> features);

enum class ForestMode { bagging, random_forest };

struct ForestOptions {
    ForestMode mode = ForestMode::random_forest;
    int tree_count = 200;
    std::uint64_t seed = 0;
    bool bootstrap = true;  // test hook; production forests always resample
    int threads = 0;
};

struct ForestModel {
    ForestModel() = default;
    ForestModel(ForestModel&&) = default;
    ForestModel& operator=(ForestModel&&) = default;
    ForestModel(const ForestModel&) = delete;
    ForestModel& operator=(const ForestModel&) = delete;

    ForestMode mode = ForestMode::random_forest;
    int features_per_split = 0;
    int tree_count = 0;
    std::uint64_t seed = 0;
    std::size_t feature_count = 0;
    double oob_mse = 0.0;  // out-of-bag error, reported but never used
    std::vector<std::unique_ptr<TreeNode>> trees;

    /// Arithmetic mean of the per-tree predictions.
    double predict(std::span<const double> features) const;
};

/// Trains `tree_count` trees, each on a bootstrap resample of the training
/// set. random_forest mode uses floor(sqrt(p)) features per split (min 1),
/// bagging uses all p. Deterministic for a given seed; trees are stored in
/// index order regardless of thread count.
ForestModel fit_forest(const TrainingSet& data, const ForestOptions& options);

/// The paper's class probability for a regression output m and true class
/// C: P = 1 - |m - C|, clamped to [0, 1].
double class_score(double prediction, int true_class);

/// Nearest class index for a regression output, clamped to [0, K-1].
int predicted_class(double prediction, int class_count);

} // namespace mfts
