#include "mfts/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mfts/features.hpp"
#include "mfts/parallel.hpp"
#include "mfts/random.hpp"
#include "mfts/stats.hpp"

namespace mfts {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::vector<int>> make_histogram(const std::vector<PerExample>& examples,
                                             int class_count) {
    std::vector<std::vector<int>> hist(static_cast<std::size_t>(class_count),
                                       std::vector<int>(static_cast<std::size_t>(class_count), 0));
    for (const PerExample& e : examples) {
        hist[static_cast<std::size_t>(e.true_class)][static_cast<std::size_t>(e.predicted_class)]++;
    }
    return hist;
}

ApproachResult finish_result(Approach approach, std::vector<PerExample> examples,
                             int class_count, double train_seconds, double eval_seconds) {
    ApproachResult result;
    result.approach = approach;
    result.train_seconds = train_seconds;
    result.eval_seconds = eval_seconds;
    double sum = 0.0;
    for (const PerExample& e : examples) sum += e.score;
    result.mean_score = examples.empty() ? 0.0 : sum / static_cast<double>(examples.size());
    result.histogram = make_histogram(examples, class_count);
    result.examples = std::move(examples);
    return result;
}

TrainingSet raw_training_set(const std::vector<DatasetItem>& items) {
    TrainingSet set;
    for (const DatasetItem& item : items) {
        set.add_row(item.series, static_cast<double>(item.class_index));
    }
    return set;
}

TrainingSet feature_training_set(const std::vector<DatasetItem>& items,
                                 const MfdfaConfig& config, int threads) {
    std::vector<std::array<double, 8>> rows(items.size());
    parallel_for(items.size(), threads, [&](std::size_t i) {
        const MfdfaResult analysis = analyze(items[i].series, config);
        rows[i] = extract_features(items[i].series, analysis).values();
    });
    TrainingSet set;
    for (std::size_t i = 0; i < items.size(); ++i) {
        set.add_row(rows[i], static_cast<double>(items[i].class_index));
    }
    return set;
}

ApproachResult run_forest_approach(Approach approach, const ExperimentPlan& plan,
                                   const TrainingSet& train, const TrainingSet& test,
                                   const std::vector<DatasetItem>& test_items,
                                   double prep_train_seconds, double prep_eval_seconds,
                                   int threads) {
    const auto t0 = std::chrono::steady_clock::now();
    ForestOptions options;
    options.mode = plan.forest_mode;
    options.tree_count = plan.forest_trees;
    options.threads = threads;
    options.seed = derive_seed(plan.seed, approach == Approach::raw_values
                                              ? "forest-raw"
                                              : "forest-characteristics");
    const ForestModel model = fit_forest(train, options);
    const double train_seconds = prep_train_seconds + seconds_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    const int k = static_cast<int>(plan.scheme.intervals.size());
    std::vector<PerExample> examples(test.row_count);
    for (std::size_t i = 0; i < test.row_count; ++i) {
        PerExample e;
        e.true_class = test_items[i].class_index;
        e.h_target = test_items[i].h_target;
        e.prediction = model.predict(test.row(i));
        e.predicted_class = predicted_class(e.prediction, k);
        e.score = class_score(e.prediction, e.true_class);
        examples[i] = e;
    }
    return finish_result(approach, std::move(examples), k, train_seconds,
                         prep_eval_seconds + seconds_since(t1));
}

} // namespace

std::string approach_name(Approach approach) {
    switch (approach) {
        case Approach::raw_values: return "raw_values";
        case Approach::characteristics: return "characteristics";
        case Approach::confidence_interval: return "confidence_interval";
    }
    throw std::invalid_argument("approach_name: unknown approach");
}

Approach approach_from_name(const std::string& name) {
    if (name == "raw_values") return Approach::raw_values;
    if (name == "characteristics") return Approach::characteristics;
    if (name == "confidence_interval") return Approach::confidence_interval;
    throw std::invalid_argument("unknown approach '" + name + "'");
}

int ExperimentPlan::cascade_iterations() const {
    if (series_length < 2 || (series_length & (series_length - 1)) != 0) {
        throw std::invalid_argument("experiment: series_length must be a power of two");
    }
    int n = 0;
    while ((1ULL << n) < series_length) ++n;
    return n;
}

void ExperimentPlan::validate() const {
    scheme.validate_hurst_range();
    (void)cascade_iterations();
    if (train_per_class < 1 || test_per_class < 1) {
        throw std::invalid_argument("experiment: train and test counts must be >= 1");
    }
    if (approaches.empty()) {
        throw std::invalid_argument("experiment: no approaches selected");
    }
    if (forest_trees < 1) {
        throw std::invalid_argument("experiment: forest_trees must be >= 1");
    }
    if (!(interval_alpha > 0.0 && interval_alpha < 1.0)) {
        throw std::invalid_argument("experiment: interval_alpha must be in (0, 1)");
    }
    // Fail early if the length cannot support the default MFDFA grids.
    (void)MfdfaConfig::for_length(series_length, poly_order);
}

BuiltDataset build_dataset(const ExperimentPlan& plan, int threads) {
    plan.validate();
    const int n = plan.cascade_iterations();
    const int k = static_cast<int>(plan.scheme.intervals.size());

    BuiltDataset data;
    auto build_split = [&](const char* tag, int per_class, std::vector<DatasetItem>& out) {
        out.resize(static_cast<std::size_t>(k) * static_cast<std::size_t>(per_class));
        parallel_for(out.size(), threads, [&](std::size_t idx) {
            const int cls = static_cast<int>(idx / static_cast<std::size_t>(per_class));
            const std::uint64_t item = idx % static_cast<std::size_t>(per_class);
            const ClassInterval& interval = plan.scheme.intervals[static_cast<std::size_t>(cls)];

            Rng h_rng(derive_seed(plan.seed, tag, static_cast<std::uint64_t>(cls), item));
            DatasetItem d;
            d.class_index = cls;
            d.h_target = interval.lower + uniform01(h_rng) * (interval.upper - interval.lower);
            d.alpha = alpha_for_hurst(d.h_target);
            d.seed = h_rng();

            CascadeParams params;
            params.n = n;
            params.alpha = params.beta = d.alpha;
            params.seed = d.seed;
            d.series = generate_cascade(params);
            out[idx] = std::move(d);
        });
    };
    build_split("dataset-train", plan.train_per_class, data.train);
    build_split("dataset-test", plan.test_per_class, data.test);
    return data;
}

ApproachResult run_approach_raw(const ExperimentPlan& plan, const BuiltDataset& data, int threads) {
    const TrainingSet train = raw_training_set(data.train);
    const TrainingSet test = raw_training_set(data.test);
    return run_forest_approach(Approach::raw_values, plan, train, test, data.test, 0.0, 0.0,
                               threads);
}

ApproachResult run_approach_characteristics(const ExperimentPlan& plan, const BuiltDataset& data,
                                            int threads) {
    const MfdfaConfig config = MfdfaConfig::for_length(plan.series_length, plan.poly_order);
    const auto t0 = std::chrono::steady_clock::now();
    const TrainingSet train = feature_training_set(data.train, config, threads);
    const double prep_train = seconds_since(t0);
    const auto t1 = std::chrono::steady_clock::now();
    const TrainingSet test = feature_training_set(data.test, config, threads);
    const double prep_eval = seconds_since(t1);
    return run_forest_approach(Approach::characteristics, plan, train, test, data.test,
                               prep_train, prep_eval, threads);
}

ApproachResult run_approach_interval(const ExperimentPlan& plan, const BuiltDataset& data,
                                     const CalibrationTable& table) {
    const MfdfaConfig config = MfdfaConfig::for_length(plan.series_length, plan.poly_order);
    const int k = static_cast<int>(plan.scheme.intervals.size());
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<PerExample> examples(data.test.size());
    for (std::size_t i = 0; i < data.test.size(); ++i) {
        const DatasetItem& item = data.test[i];
        const double h_hat = estimate_hurst(item.series, config);
        const IntervalClassification cls =
            classify_by_interval(h_hat, plan.series_length, plan.interval_alpha, table, plan.scheme);
        PerExample e;
        e.true_class = item.class_index;
        e.h_target = item.h_target;
        e.prediction = cls.interval.center;
        e.predicted_class = cls.predicted_class;
        e.score = cls.class_mass[static_cast<std::size_t>(item.class_index)];
        examples[i] = e;
    }
    return finish_result(Approach::confidence_interval, std::move(examples), k, 0.0,
                         seconds_since(t0));
}

ExperimentResult run_experiment(const ExperimentPlan& plan, const CalibrationTable* external_table,
                                int threads) {
    plan.validate();
    ExperimentResult result;

    bool needs_interval = false;
    for (Approach a : plan.approaches) {
        if (a == Approach::confidence_interval) needs_interval = true;
    }
    if (needs_interval) {
        if (external_table != nullptr) {
            result.calibration = *external_table;
        } else {
            CalibrationOptions options;
            options.lengths = {plan.series_length};
            options.trials_per_cell = plan.calibration_trials;
            options.seed = derive_seed(plan.seed, "auto-calibration");
            options.poly_order = plan.poly_order;
            options.threads = threads;
            result.calibration = build_calibration(options);
            result.calibration_auto_built = true;
        }
    }

    result.dataset = build_dataset(plan, threads);
    const BuiltDataset& data = result.dataset;

    ExperimentReport& report = result.report;
    report.name = plan.name;
    report.scheme_label = plan.scheme_label;
    report.class_count = static_cast<int>(plan.scheme.intervals.size());
    report.series_length = plan.series_length;
    report.train_per_class = plan.train_per_class;
    report.test_per_class = plan.test_per_class;
    report.seed = plan.seed;

    for (Approach a : plan.approaches) {
        switch (a) {
            case Approach::raw_values:
                report.approaches.push_back(run_approach_raw(plan, data, threads));
                break;
            case Approach::characteristics:
                report.approaches.push_back(run_approach_characteristics(plan, data, threads));
                break;
            case Approach::confidence_interval:
                report.approaches.push_back(run_approach_interval(plan, data, *result.calibration));
                break;
        }
    }
    return result;
}

std::string render_report_table(const std::vector<ExperimentReport>& reports) {
    auto format_time = [](double seconds) -> std::string {
        char buf[32];
        if (seconds <= 0.0) return "-";
        if (seconds < 120.0) {
            std::snprintf(buf, sizeof(buf), "%.1f s", seconds);
        } else {
            std::snprintf(buf, sizeof(buf), "%.1f min", seconds / 60.0);
        }
        return buf;
    };

    const Approach order[] = {Approach::raw_values, Approach::characteristics,
                              Approach::confidence_interval};
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-12s %-8s %-22s %-22s %-22s\n", "", "",
                  "Time series values", "Time series chars", "Estimate H");
    out += line;
    std::snprintf(line, sizeof(line), "%-12s %-8s %-10s %-11s %-10s %-11s %-10s %-11s\n",
                  "Scheme", "Length", "P", "time", "P", "time", "P", "time");
    out += line;
    for (const ExperimentReport& report : reports) {
        std::string cells;
        for (Approach a : order) {
            const ApproachResult* found = nullptr;
            for (const ApproachResult& r : report.approaches) {
                if (r.approach == a) found = &r;
            }
            char cell[64];
            if (found != nullptr) {
                std::snprintf(cell, sizeof(cell), "%-10.3f %-11s", found->mean_score,
                              format_time(found->train_seconds).c_str());
            } else {
                std::snprintf(cell, sizeof(cell), "%-10s %-11s", "-", "-");
            }
            cells += cell;
            cells += ' ';
        }
        std::snprintf(line, sizeof(line), "%-12s %-8llu %s\n", report.scheme_label.c_str(),
                      static_cast<unsigned long long>(report.series_length), cells.c_str());
        out += line;
    }
    return out;
}

} // namespace mfts
