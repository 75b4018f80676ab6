#include "mfts/io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mfts {

using nlohmann::json;

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path.string());
    }
    return in;
}

json tree_node_to_json(const TreeNode& node) {
    if (node.is_leaf()) {
        return json{{"prediction", node.prediction}, {"count", node.count}};
    }
    return json{{"feature_index", node.feature_index},
                {"threshold", node.threshold},
                {"left", tree_node_to_json(*node.left)},
                {"right", tree_node_to_json(*node.right)}};
}

std::unique_ptr<TreeNode> tree_node_from_json(const json& j) {
    auto node = std::make_unique<TreeNode>();
    if (j.contains("feature_index")) {
        node->feature_index = j.at("feature_index").get<int>();
        node->threshold = j.at("threshold").get<double>();
        node->left = tree_node_from_json(j.at("left"));
        node->right = tree_node_from_json(j.at("right"));
    } else {
        node->feature_index = -1;
        node->prediction = j.at("prediction").get<double>();
        node->count = j.value("count", 0);
    }
    return node;
}

} // namespace

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series) {
    auto out = open_out(path);
    out << "value\n";
    for (double v : series) {
        out << format_double(v) << '\n';
    }
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("value", 0) != 0) {
        throw std::runtime_error("series csv must start with a 'value' header: " + path.string());
    }
    TimeSeries series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        series.push_back(std::stod(line));
    }
    if (series.empty()) {
        throw std::runtime_error("series csv has no samples: " + path.string());
    }
    return series;
}

void write_features_csv(const std::filesystem::path& path,
                        const std::vector<FeatureVector>& rows,
                        const std::vector<int>& class_indices) {
    if (rows.size() != class_indices.size()) {
        throw std::invalid_argument("write_features_csv: rows and class indices differ in size");
    }
    auto out = open_out(path);
    const auto& names = FeatureVector::names();
    for (const auto& name : names) out << name << ',';
    out << "class_index\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (double v : rows[i].values()) out << format_double(v) << ',';
        out << class_indices[i] << '\n';
    }
}

TrainingSet read_features_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("empty features csv: " + path.string());
    }
    std::string expected;
    for (const auto& name : FeatureVector::names()) expected += name + ",";
    expected += "class_index";
    if (line != expected) {
        throw std::runtime_error("unexpected features csv header: " + line);
    }
    TrainingSet set;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(ss, cell, ',')) {
            values.push_back(std::stod(cell));
        }
        if (values.size() != FeatureVector::size() + 1) {
            throw std::runtime_error("bad features csv row: " + line);
        }
        const double target = values.back();
        values.pop_back();
        set.add_row(values, target);
    }
    return set;
}

json mfdfa_result_to_json(const MfdfaResult& result) {
    return json{{"q", result.q_grid},
                {"h", result.h_of_q},
                {"r2", result.fit_r2},
                {"tau", result.tau_grid},
                {"Fq", result.fluctuation},
                {"low_confidence_q", result.low_confidence_q},
                {"degenerate_input", result.degenerate_input}};
}

json calibration_to_json(const CalibrationTable& table) {
    json entries = json::array();
    for (const auto& [length, entry] : table.entries) {
        entries.push_back(json{{"N", length},
                               {"delta", entry.delta},
                               {"s", entry.s},
                               {"trials", entry.trials},
                               {"h_grid", entry.h_grid},
                               {"per_h_bias", entry.per_h_bias},
                               {"degenerate", entry.degenerate}});
    }
    return json{{"config_hash", table.config_hash}, {"entries", entries}};
}

CalibrationTable calibration_from_json(const json& j) {
    CalibrationTable table;
    table.config_hash = j.value("config_hash", "");
    for (const auto& e : j.at("entries")) {
        CalibrationEntry entry;
        entry.delta = e.at("delta").get<double>();
        entry.s = e.at("s").get<double>();
        entry.trials = e.at("trials").get<int>();
        if (e.contains("h_grid")) entry.h_grid = e.at("h_grid").get<std::vector<double>>();
        if (e.contains("per_h_bias")) {
            entry.per_h_bias = e.at("per_h_bias").get<std::vector<double>>();
        }
        entry.degenerate = e.value("degenerate", false);
        table.entries[e.at("N").get<std::uint64_t>()] = entry;
    }
    return table;
}

json forest_to_json(const ForestModel& model) {
    json trees = json::array();
    for (const auto& tree : model.trees) {
        trees.push_back(tree_node_to_json(*tree));
    }
    return json{{"mode", model.mode == ForestMode::random_forest ? "random_forest" : "bagging"},
                {"tree_count", model.tree_count},
                {"features_per_split", model.features_per_split},
                {"feature_count", model.feature_count},
                {"seed", model.seed},
                {"oob_mse", model.oob_mse},
                {"trees", trees}};
}

ForestModel forest_from_json(const json& j) {
    ForestModel model;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "random_forest") {
        model.mode = ForestMode::random_forest;
    } else if (mode == "bagging") {
        model.mode = ForestMode::bagging;
    } else {
        throw std::invalid_argument("forest_from_json: unknown mode '" + mode + "'");
    }
    model.tree_count = j.at("tree_count").get<int>();
    model.features_per_split = j.at("features_per_split").get<int>();
    model.feature_count = j.at("feature_count").get<std::size_t>();
    model.seed = j.value("seed", 0ULL);
    // NaN serializes as null; treat anything non-numeric as "not recorded".
    model.oob_mse = (j.contains("oob_mse") && j.at("oob_mse").is_number())
                        ? j.at("oob_mse").get<double>()
                        : std::numeric_limits<double>::quiet_NaN();
    for (const auto& t : j.at("trees")) {
        model.trees.push_back(tree_node_from_json(t));
    }
    if (model.trees.empty()) {
        throw std::invalid_argument("forest_from_json: model has no trees");
    }
    return model;
}

json plan_to_json(const ExperimentPlan& plan) {
    std::vector<double> boundaries;
    boundaries.push_back(plan.scheme.intervals.front().lower);
    for (const auto& interval : plan.scheme.intervals) {
        boundaries.push_back(interval.upper);
    }
    std::vector<std::string> approaches;
    for (Approach a : plan.approaches) approaches.push_back(approach_name(a));
    return json{{"name", plan.name},
                {"scheme", boundaries},
                {"scheme_label", plan.scheme_label},
                {"length", plan.series_length},
                {"train_per_class", plan.train_per_class},
                {"test_per_class", plan.test_per_class},
                {"approaches", approaches},
                {"seed", plan.seed},
                {"poly_order", plan.poly_order},
                {"forest",
                 {{"mode", plan.forest_mode == ForestMode::random_forest ? "random_forest"
                                                                         : "bagging"},
                  {"trees", plan.forest_trees}}},
                {"interval_alpha", plan.interval_alpha},
                {"calibration_trials", plan.calibration_trials}};
}

ExperimentPlan plan_from_json(const json& j) {
    ExperimentPlan plan;
    plan.name = j.value("name", "experiment");
    if (j.contains("scheme")) {
        const auto& scheme = j.at("scheme");
        if (scheme.is_string()) {
            const std::string label = scheme.get<std::string>();
            if (label == "2class" || label == "2") {
                plan.scheme = two_class_scheme();
                plan.scheme_label = "2 classes";
            } else if (label == "11class" || label == "11") {
                plan.scheme = eleven_class_scheme();
                plan.scheme_label = "11 classes";
            } else {
                throw std::invalid_argument("plan: unknown scheme '" + label + "'");
            }
        } else {
            plan.scheme = scheme_from_boundaries(scheme.get<std::vector<double>>());
            plan.scheme_label = std::to_string(plan.scheme.intervals.size()) + " classes";
        }
    }
    plan.scheme_label = j.value("scheme_label", plan.scheme_label);
    plan.series_length = j.value("length", 512ULL);
    plan.train_per_class = j.value("train_per_class", 100);
    plan.test_per_class = j.value("test_per_class", 20);
    if (j.contains("approaches")) {
        plan.approaches.clear();
        for (const auto& name : j.at("approaches")) {
            plan.approaches.push_back(approach_from_name(name.get<std::string>()));
        }
    }
    plan.seed = j.value("seed", 0ULL);
    plan.poly_order = j.value("poly_order", 2);
    if (j.contains("forest")) {
        const auto& forest = j.at("forest");
        const std::string mode = forest.value("mode", "random_forest");
        if (mode == "random_forest") {
            plan.forest_mode = ForestMode::random_forest;
        } else if (mode == "bagging") {
            plan.forest_mode = ForestMode::bagging;
        } else {
            throw std::invalid_argument("plan: unknown forest mode '" + mode + "'");
        }
        plan.forest_trees = forest.value("trees", 200);
    }
    plan.interval_alpha = j.value("interval_alpha", 0.05);
    plan.calibration_trials = j.value("calibration_trials", 200);
    plan.validate();
    return plan;
}

namespace {

json approach_result_to_json(const ApproachResult& result) {
    json examples = json::array();
    for (const PerExample& e : result.examples) {
        examples.push_back(json{{"true_class", e.true_class},
                                {"h_target", e.h_target},
                                {"prediction", e.prediction},
                                {"predicted_class", e.predicted_class},
                                {"score", e.score}});
    }
    return json{{"approach", approach_name(result.approach)},
                {"mean_score", result.mean_score},
                {"histogram", result.histogram},
                {"examples", examples}};
}

} // namespace

json report_to_json(const ExperimentReport& report) {
    json approaches = json::array();
    for (const ApproachResult& r : report.approaches) {
        approaches.push_back(approach_result_to_json(r));
    }
    return json{{"name", report.name},
                {"scheme_label", report.scheme_label},
                {"class_count", report.class_count},
                {"length", report.series_length},
                {"train_per_class", report.train_per_class},
                {"test_per_class", report.test_per_class},
                {"seed", report.seed},
                {"approaches", approaches}};
}

json report_timings_to_json(const ExperimentReport& report) {
    json timings = json::object();
    for (const ApproachResult& r : report.approaches) {
        timings[approach_name(r.approach)] = json{{"train_seconds", r.train_seconds},
                                                  {"eval_seconds", r.eval_seconds}};
    }
    return timings;
}

json manifest_to_json(const std::vector<ManifestRecord>& records) {
    json arr = json::array();
    for (const ManifestRecord& r : records) {
        json rec{{"class_index", r.class_index},
                 {"H_target", r.h_target},
                 {"alpha", r.alpha},
                 {"seed", r.seed},
                 {"length", r.length}};
        rec["path"] = r.path.empty() ? json() : json(r.path);
        arr.push_back(rec);
    }
    return arr;
}

std::vector<ManifestRecord> dataset_manifest(const BuiltDataset& data, std::uint64_t length) {
    std::vector<ManifestRecord> records;
    auto add = [&](const std::vector<DatasetItem>& items) {
        for (const DatasetItem& item : items) {
            ManifestRecord r;
            r.class_index = item.class_index;
            r.h_target = item.h_target;
            r.alpha = item.alpha;
            r.seed = item.seed;
            r.length = length;
            records.push_back(r);
        }
    };
    add(data.train);
    add(data.test);
    return records;
}

void write_histogram_csv(const std::filesystem::path& path, const ApproachResult& result) {
    auto out = open_out(path);
    const std::size_t k = result.histogram.size();
    out << "true_class";
    for (std::size_t j = 0; j < k; ++j) out << ",predicted_" << j;
    out << '\n';
    for (std::size_t i = 0; i < k; ++i) {
        out << i;
        for (std::size_t j = 0; j < k; ++j) out << ',' << result.histogram[i][j];
        out << '\n';
    }
}

json read_json_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("invalid json in " + path.string() + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

} // namespace mfts
