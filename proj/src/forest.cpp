#include "mfts/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfts/parallel.hpp"

namespace mfts {

void TrainingSet::add_row(std::span<const double> row, double target) {
    if (row_count == 0) {
        col_count = row.size();
    } else if (row.size() != col_count) {
        throw std::invalid_argument("TrainingSet: inconsistent feature dimension");
    }
    if (col_count == 0) {
        throw std::invalid_argument("TrainingSet: empty feature vector");
    }
    features.insert(features.end(), row.begin(), row.end());
    targets.push_back(target);
    ++row_count;
}

namespace {

struct ValueTarget {
    double value;
    double target;
};

bool targets_all_equal(const TrainingSet& data, std::span<const std::size_t> rows) {
    const double first = data.targets[rows[0]];
    for (std::size_t r : rows) {
        if (data.targets[r] != first) return false;
    }
    return true;
}

double subset_mean(const TrainingSet& data, std::span<const std::size_t> rows) {
    double sum = 0.0;
    for (std::size_t r : rows) sum += data.targets[r];
    return sum / static_cast<double>(rows.size());
}

void fill_leaf(TreeNode& node, const TrainingSet& data, std::span<const std::size_t> rows) {
    node.feature_index = -1;
    node.prediction = subset_mean(data, rows);
    node.count = static_cast<int>(rows.size());
}

} // namespace

std::optional<SplitChoice> best_split(const TrainingSet& data,
                                      std::span<const std::size_t> rows,
                                      std::span<const int> candidate_features) {
    if (rows.size() < 2 || candidate_features.empty()) {
        return std::nullopt;
    }
    if (targets_all_equal(data, rows)) {
        return std::nullopt;
    }

    double total_sum = 0.0, total_sum2 = 0.0;
    for (std::size_t r : rows) {
        const double y = data.targets[r];
        total_sum += y;
        total_sum2 += y * y;
    }
    const double n = static_cast<double>(rows.size());
    const double parent_sse = total_sum2 - total_sum * total_sum / n;

    std::optional<SplitChoice> best;
    double best_sse = parent_sse;

    std::vector<ValueTarget> column(rows.size());
    for (int f : candidate_features) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            column[i] = {data.feature(rows[i], static_cast<std::size_t>(f)),
                         data.targets[rows[i]]};
        }
        std::sort(column.begin(), column.end(),
                  [](const ValueTarget& a, const ValueTarget& b) { return a.value < b.value; });

        double left_sum = 0.0, left_sum2 = 0.0;
        for (std::size_t i = 0; i + 1 < column.size(); ++i) {
            left_sum += column[i].target;
            left_sum2 += column[i].target * column[i].target;
            if (column[i].value == column[i + 1].value) {
                continue; // thresholds only between distinct values
            }
            const double nl = static_cast<double>(i + 1);
            const double nr = n - nl;
            const double right_sum = total_sum - left_sum;
            const double right_sum2 = total_sum2 - left_sum2;
            const double sse = (left_sum2 - left_sum * left_sum / nl) +
                               (right_sum2 - right_sum * right_sum / nr);
            if (sse < best_sse) {
                double threshold = 0.5 * (column[i].value + column[i + 1].value);
                if (threshold >= column[i + 1].value) {
                    threshold = column[i].value; // midpoint rounded up; keep split valid
                }
                best_sse = sse;
                best = SplitChoice{f, threshold};
            }
        }
    }
    return best;
}

std::unique_ptr<TreeNode> fit_tree(const TrainingSet& data,
                                   std::vector<std::size_t> rows,
                                   int features_per_split, Rng& rng) {
    if (rows.empty()) {
        throw std::invalid_argument("fit_tree: need at least one row");
    }
    if (data.row_count == 0 || data.col_count == 0) {
        throw std::invalid_argument("fit_tree: empty training set");
    }
    const int p = static_cast<int>(data.col_count);
    const int k = std::clamp(features_per_split, 1, p);

    // Feature pool reshuffled in place per node; stays a permutation of 0..p-1.
    std::vector<int> pool(data.col_count);
    for (int i = 0; i < p; ++i) pool[static_cast<std::size_t>(i)] = i;
    std::vector<int> picked(static_cast<std::size_t>(k));

    struct Frame {
        std::size_t begin, end;
        TreeNode* node;
    };

    auto root = std::make_unique<TreeNode>();
    std::vector<Frame> stack{{0, rows.size(), root.get()}};
    // Depth-first, left before right, so the rng stream matches recursion.
    while (!stack.empty()) {
        const Frame frame = stack.back();
        stack.pop_back();
        std::span<const std::size_t> node_rows(rows.data() + frame.begin,
                                               frame.end - frame.begin);
        TreeNode* node = frame.node;

        if (node_rows.size() < 2 || targets_all_equal(data, node_rows)) {
            fill_leaf(*node, data, node_rows);
            continue;
        }

        for (int j = 0; j < k; ++j) {
            const std::size_t swap_with =
                static_cast<std::size_t>(j) +
                bounded_int(rng, static_cast<std::uint64_t>(p - j));
            std::swap(pool[static_cast<std::size_t>(j)], pool[swap_with]);
            picked[static_cast<std::size_t>(j)] = pool[static_cast<std::size_t>(j)];
        }
        std::sort(picked.begin(), picked.end());

        const auto split = best_split(data, node_rows, picked);
        if (!split) {
            fill_leaf(*node, data, node_rows);
            continue;
        }

        auto* base = rows.data();
        auto mid_it = std::partition(
            base + frame.begin, base + frame.end, [&](std::size_t r) {
                return data.feature(r, static_cast<std::size_t>(split->feature_index)) <=
                       split->threshold;
            });
        const std::size_t mid = static_cast<std::size_t>(mid_it - base);

        node->feature_index = split->feature_index;
        node->threshold = split->threshold;
        node->count = static_cast<int>(node_rows.size());
        node->left = std::make_unique<TreeNode>();
        node->right = std::make_unique<TreeNode>();
        // Push right first so the left child is processed first.
        stack.push_back({mid, frame.end, node->right.get()});
        stack.push_back({frame.begin, mid, node->left.get()});
    }
    return root;
}

double tree_predict(const TreeNode& node, std::span<const double> features) {
    const TreeNode* cur = &node;
    while (!cur->is_leaf()) {
        cur = (features[static_cast<std::size_t>(cur->feature_index)] <= cur->threshold)
                  ? cur->left.get()
                  : cur->right.get();
    }
    return cur->prediction;
}

double ForestModel::predict(std::span<const double> features) const {
    if (features.size() != feature_count) {
        throw std::invalid_argument("ForestModel::predict: feature dimension mismatch");
    }
    if (trees.empty()) {
        throw std::invalid_argument("ForestModel::predict: empty model");
    }
    double sum = 0.0;
    for (const auto& tree : trees) {
        sum += tree_predict(*tree, features);
    }
    return sum / static_cast<double>(trees.size());
}

ForestModel fit_forest(const TrainingSet& data, const ForestOptions& options) {
    if (data.row_count == 0) {
        throw std::invalid_argument("fit_forest: empty training set");
    }
    if (options.tree_count < 1) {
        throw std::invalid_argument("fit_forest: tree_count must be >= 1");
    }
    const std::size_t n = data.row_count;
    const int p = static_cast<int>(data.col_count);

    ForestModel model;
    model.mode = options.mode;
    model.tree_count = options.tree_count;
    model.seed = options.seed;
    model.feature_count = data.col_count;
    model.features_per_split =
        options.mode == ForestMode::random_forest
            ? std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(p)))))
            : p;
    model.trees.resize(static_cast<std::size_t>(options.tree_count));

    std::vector<std::vector<char>> in_bag(
        model.trees.size(), std::vector<char>(options.bootstrap ? n : 0, 0));

    parallel_for(model.trees.size(), options.threads, [&](std::size_t t) {
        Rng rng(derive_seed(options.seed, "tree", t));
        std::vector<std::size_t> rows(n);
        if (options.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t r = static_cast<std::size_t>(bounded_int(rng, n));
                rows[i] = r;
                in_bag[t][r] = 1;
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) rows[i] = i;
        }
        model.trees[t] = fit_tree(data, std::move(rows), model.features_per_split, rng);
    });

    // Out-of-bag error over rows left out of at least one bootstrap sample.
    model.oob_mse = std::numeric_limits<double>::quiet_NaN();
    if (options.bootstrap) {
        double sse = 0.0;
        std::size_t scored = 0;
        for (std::size_t r = 0; r < n; ++r) {
            double sum = 0.0;
            std::size_t votes = 0;
            for (std::size_t t = 0; t < model.trees.size(); ++t) {
                if (!in_bag[t][r]) {
                    sum += tree_predict(*model.trees[t], data.row(r));
                    ++votes;
                }
            }
            if (votes > 0) {
                const double err = sum / static_cast<double>(votes) - data.targets[r];
                sse += err * err;
                ++scored;
            }
        }
        if (scored > 0) {
            model.oob_mse = sse / static_cast<double>(scored);
        }
    }
    return model;
}

double class_score(double prediction, int true_class) {
    const double p = 1.0 - std::abs(prediction - static_cast<double>(true_class));
    return std::max(0.0, p);
}

int predicted_class(double prediction, int class_count) {
    const long r = std::lround(prediction);
    const long hi = static_cast<long>(class_count) - 1;
    return static_cast<int>(std::clamp(r, 0L, hi));
}

} // namespace mfts
