#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfts/calibration.hpp"
#include "mfts/cascade.hpp"
#include "mfts/forest.hpp"
#include "mfts/mfdfa.hpp"
#include "mfts/scheme.hpp"

namespace mfts {

enum class Approach { raw_values, characteristics, confidence_interval };

std::string approach_name(Approach approach);
Approach approach_from_name(const std::string& name);

struct ExperimentPlan {
    std::string name = "experiment";
    HurstClassScheme scheme = two_class_scheme();
    std::string scheme_label = "2 classes";
    std::uint64_t series_length = 512;
    int train_per_class = 100;
    int test_per_class = 20;
    std::vector<Approach> approaches = {Approach::raw_values, Approach::characteristics,
                                        Approach::confidence_interval};
    std::uint64_t seed = 0;
    int poly_order = 2;
    ForestMode forest_mode = ForestMode::random_forest;
    int forest_trees = 200;
    double interval_alpha = 0.05;
    int calibration_trials = 200;  // used when no table is supplied

    void validate() const;
    int cascade_iterations() const;  // log2 of series_length
};

struct DatasetItem {
    int class_index = 0;
    double h_target = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    TimeSeries series;
};

struct BuiltDataset {
    std::vector<DatasetItem> train;
    std::vector<DatasetItem> test;
};

/// Draws H uniformly within each class interval, maps it to the symmetric
/// Beta shape and generates one cascade per item. Train and test use
/// disjoint derived seed streams; rebuilding with the same plan seed gives
/// an identical dataset.
BuiltDataset build_dataset(const ExperimentPlan& plan, int threads);

struct PerExample {
    int true_class = 0;
    double h_target = 0.0;
    double prediction = 0.0;  // regression output, or interval center
    int predicted_class = 0;
    double score = 0.0;       // P_i
};

struct ApproachResult {
    Approach approach = Approach::raw_values;
    double mean_score = 0.0;
    double train_seconds = 0.0;
    double eval_seconds = 0.0;
    std::vector<PerExample> examples;
    std::vector<std::vector<int>> histogram;  // [true class][predicted class]
};

struct ExperimentReport {
    std::string name;
    std::string scheme_label;
    int class_count = 0;
    std::uint64_t series_length = 0;
    int train_per_class = 0;
    int test_per_class = 0;
    std::uint64_t seed = 0;
    std::vector<ApproachResult> approaches;
};

ApproachResult run_approach_raw(const ExperimentPlan& plan, const BuiltDataset& data, int threads);
ApproachResult run_approach_characteristics(const ExperimentPlan& plan, const BuiltDataset& data,
                                            int threads);
ApproachResult run_approach_interval(const ExperimentPlan& plan, const BuiltDataset& data,
                                     const CalibrationTable& table);

struct ExperimentResult {
    ExperimentReport report;
    BuiltDataset dataset;
    std::optional<CalibrationTable> calibration;  // table used for the interval approach
    bool calibration_auto_built = false;
};

/// Runs every approach in the plan. When the interval approach is requested
/// without an external table, one is built from the plan seed.
ExperimentResult run_experiment(const ExperimentPlan& plan, const CalibrationTable* external_table,
                                int threads);

/// Fixed-width summary in the layout of the paper's results table: one row
/// per report, P and training time per approach.
std::string render_report_table(const std::vector<ExperimentReport>& reports);

} // namespace mfts
