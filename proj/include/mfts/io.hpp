#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mfts/calibration.hpp"
#include "mfts/cascade.hpp"
#include "mfts/experiment.hpp"
#include "mfts/features.hpp"
#include "mfts/forest.hpp"
#include "mfts/mfdfa.hpp"

namespace mfts {

/// 17 significant digits, enough to round-trip any double through text.
std::string format_double(double value);

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series);
TimeSeries read_series_csv(const std::filesystem::path& path);

void write_features_csv(const std::filesystem::path& path,
                        const std::vector<FeatureVector>& rows,
                        const std::vector<int>& class_indices);
/// Reads a feature CSV back as a training set (class_index as target).
TrainingSet read_features_csv(const std::filesystem::path& path);

nlohmann::json mfdfa_result_to_json(const MfdfaResult& result);

nlohmann::json calibration_to_json(const CalibrationTable& table);
CalibrationTable calibration_from_json(const nlohmann::json& j);

nlohmann::json forest_to_json(const ForestModel& model);
ForestModel forest_from_json(const nlohmann::json& j);

nlohmann::json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const nlohmann::json& j);

/// Deterministic experiment results; wall-clock timings are kept out so
/// reruns of the same plan produce byte-identical files.
nlohmann::json report_to_json(const ExperimentReport& report);
/// Per-approach wall-clock timings of a run.
nlohmann::json report_timings_to_json(const ExperimentReport& report);

struct ManifestRecord {
    int class_index = -1;
    double h_target = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t length = 0;
    std::string path;  // empty when the series is not persisted
};
nlohmann::json manifest_to_json(const std::vector<ManifestRecord>& records);
std::vector<ManifestRecord> dataset_manifest(const BuiltDataset& data, std::uint64_t length);

void write_histogram_csv(const std::filesystem::path& path, const ApproachResult& result);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace mfts
