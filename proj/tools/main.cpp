// mfts: generate multifractal cascades, estimate fractal characteristics,
// calibrate the Hurst estimator and run the classification experiments.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mfts/calibration.hpp"
#include "mfts/cascade.hpp"
#include "mfts/experiment.hpp"
#include "mfts/features.hpp"
#include "mfts/forest.hpp"
#include "mfts/io.hpp"
#include "mfts/mfdfa.hpp"
#include "mfts/parallel.hpp"
#include "mfts/random.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOptions {
    int threads = 0;
    bool verbose = false;
};

fs::path resolve_output(const fs::path& path) {
    const char* base = std::getenv("MFTS_OUTPUT_DIR");
    if (base != nullptr && *base != '\0' && path.is_relative()) {
        return fs::path(base) / path;
    }
    return path;
}

void require_writable(const fs::path& path, bool force) {
    if (!force && fs::exists(path)) {
        throw std::invalid_argument("refusing to overwrite " + path.string() +
                                    " (pass --force to allow)");
    }
}

void log_config(const std::string& command, const json& resolved) {
    std::cerr << "[mfts] " << command << " " << resolved.dump() << "\n";
}

char format_buffer[64];

std::string format_count(std::size_t i, std::size_t total) {
    int width = 1;
    for (std::size_t t = total; t >= 10; t /= 10) ++width;
    std::snprintf(format_buffer, sizeof(format_buffer), "%0*zu", width < 3 ? 3 : width, i);
    return format_buffer;
}

int run_generate(const GlobalOptions& global, int n, double hurst, double alpha, bool has_hurst,
                 int count, std::uint64_t seed, const std::string& out, bool force) {
    const fs::path out_dir = resolve_output(out);
    double shape = alpha;
    double h_target = 0.0;
    if (has_hurst) {
        shape = mfts::alpha_for_hurst(hurst);
        h_target = hurst;
    } else {
        h_target = mfts::hurst_for_alpha(alpha);
    }
    log_config("generate", json{{"n", n},
                                {"hurst", h_target},
                                {"alpha", shape},
                                {"count", count},
                                {"seed", seed},
                                {"out", out_dir.string()},
                                {"threads", mfts::resolve_threads(global.threads)}});

    fs::create_directories(out_dir);
    const fs::path manifest_path = out_dir / "manifest.json";
    require_writable(manifest_path, force);

    std::vector<mfts::ManifestRecord> records;
    std::vector<mfts::TimeSeries> series(static_cast<std::size_t>(count));
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < series.size(); ++i) {
        seeds[i] = mfts::derive_seed(seed, "generate", i);
    }
    mfts::parallel_for(series.size(), global.threads, [&](std::size_t i) {
        mfts::CascadeParams params;
        params.n = n;
        params.alpha = params.beta = shape;
        params.seed = seeds[i];
        series[i] = mfts::generate_cascade(params);
    });
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::string name = "series_" + format_count(i, series.size()) + ".csv";
        const fs::path path = out_dir / name;
        require_writable(path, force);
        mfts::write_series_csv(path, series[i]);
        mfts::ManifestRecord record;
        record.class_index = -1;
        record.h_target = h_target;
        record.alpha = shape;
        record.seed = seeds[i];
        record.length = 1ULL << n;
        record.path = name;
        records.push_back(record);
    }
    mfts::write_json_file(manifest_path, mfts::manifest_to_json(records));
    std::cout << "wrote " << count << " series and manifest to " << out_dir.string() << "\n";
    return 0;
}

int run_mfdfa(const GlobalOptions& global, const std::string& input, int poly_order,
              bool forward_only, const std::string& out, bool force) {
    (void)global;
    const mfts::TimeSeries series = mfts::read_series_csv(input);
    mfts::MfdfaConfig config = mfts::MfdfaConfig::for_length(series.size(), poly_order);
    config.use_backward_segments = !forward_only;
    log_config("mfdfa", json{{"input", input},
                             {"length", series.size()},
                             {"poly_order", poly_order},
                             {"backward_segments", config.use_backward_segments}});

    const mfts::MfdfaResult result = mfts::analyze(series, config);
    if (result.degenerate_input) {
        std::cerr << "[mfts] warning: degenerate input, most segments carried no fluctuation\n";
    }
    for (double q : result.low_confidence_q) {
        std::cerr << "[mfts] warning: low-confidence fit (R^2 < 0.8) at q = " << q << "\n";
    }
    std::printf("%10s %10s\n", "q", "h(q)");
    for (std::size_t i = 0; i < result.q_grid.size(); ++i) {
        std::printf("%10.2f %10.4f\n", result.q_grid[i], result.h_of_q[i]);
    }
    std::printf("Hurst estimate h(2) = %.4f\n", result.hurst());
    if (!out.empty()) {
        const fs::path path = resolve_output(out);
        require_writable(path, force);
        mfts::write_json_file(path, mfts::mfdfa_result_to_json(result));
    }
    return 0;
}

int run_features(const GlobalOptions& global, const std::vector<std::string>& inputs,
                 const std::string& manifest, int class_index, int poly_order,
                 const std::string& out, bool force) {
    std::vector<fs::path> paths;
    std::vector<int> classes;
    if (!manifest.empty()) {
        const fs::path manifest_path(manifest);
        const json m = mfts::read_json_file(manifest_path);
        for (const auto& record : m) {
            if (!record.contains("path") || record.at("path").is_null()) {
                throw std::invalid_argument("manifest record has no series path");
            }
            paths.push_back(manifest_path.parent_path() / record.at("path").get<std::string>());
            classes.push_back(record.value("class_index", -1));
        }
    }
    for (const std::string& input : inputs) {
        paths.push_back(input);
        classes.push_back(class_index);
    }
    if (paths.empty()) {
        throw std::invalid_argument("features: no input series (use --input or --manifest)");
    }
    log_config("features", json{{"inputs", paths.size()}, {"poly_order", poly_order}, {"out", out}});

    std::vector<mfts::FeatureVector> rows(paths.size());
    mfts::parallel_for(paths.size(), global.threads, [&](std::size_t i) {
        const mfts::TimeSeries series = mfts::read_series_csv(paths[i]);
        const mfts::MfdfaConfig config = mfts::MfdfaConfig::for_length(series.size(), poly_order);
        rows[i] = mfts::extract_features(series, mfts::analyze(series, config));
    });

    const fs::path out_path = resolve_output(out);
    require_writable(out_path, force);
    mfts::write_features_csv(out_path, rows, classes);
    std::cout << "wrote " << rows.size() << " feature rows to " << out_path.string() << "\n";
    return 0;
}

int run_calibrate(const GlobalOptions& global, const std::vector<std::uint64_t>& lengths,
                  int trials, std::uint64_t seed, const std::vector<double>& h_grid,
                  int poly_order, const std::string& out, bool force) {
    mfts::CalibrationOptions options;
    options.lengths = lengths;
    options.trials_per_cell = trials;
    options.seed = seed;
    options.poly_order = poly_order;
    options.threads = global.threads;
    if (!h_grid.empty()) {
        options.h_grid = h_grid;
    }
    log_config("calibrate", json{{"lengths", lengths},
                                 {"trials_per_cell", trials},
                                 {"h_grid", options.h_grid},
                                 {"seed", seed},
                                 {"out", out}});

    const mfts::CalibrationTable table = mfts::build_calibration(options);
    for (const auto& [length, entry] : table.entries) {
        std::printf("N=%-8llu delta=%+.5f S=%.5f trials/cell=%d%s\n",
                    static_cast<unsigned long long>(length), entry.delta, entry.s, entry.trials,
                    entry.degenerate ? "  (degenerate)" : "");
    }
    const fs::path path = resolve_output(out);
    require_writable(path, force);
    mfts::write_json_file(path, mfts::calibration_to_json(table));
    return 0;
}

int run_train(const GlobalOptions& global, const std::string& features_path,
              const std::string& mode, int trees, std::uint64_t seed, const std::string& out,
              bool force) {
    const mfts::TrainingSet data = mfts::read_features_csv(features_path);
    mfts::ForestOptions options;
    options.mode = (mode == "bagging") ? mfts::ForestMode::bagging : mfts::ForestMode::random_forest;
    options.tree_count = trees;
    options.seed = seed;
    options.threads = global.threads;
    log_config("train", json{{"features", features_path},
                             {"rows", data.row_count},
                             {"columns", data.col_count},
                             {"mode", mode},
                             {"trees", trees},
                             {"seed", seed}});

    const mfts::ForestModel model = mfts::fit_forest(data, options);
    std::cout << "trained " << model.tree_count << " trees (" << model.features_per_split
              << " features per split), oob mse = " << model.oob_mse << "\n";
    const fs::path path = resolve_output(out);
    require_writable(path, force);
    mfts::write_json_file(path, mfts::forest_to_json(model));
    return 0;
}

int run_predict(const GlobalOptions& global, const std::string& model_path,
                const std::string& features_path, const std::string& out, bool force) {
    (void)global;
    const mfts::ForestModel model = mfts::forest_from_json(mfts::read_json_file(model_path));
    const mfts::TrainingSet data = mfts::read_features_csv(features_path);
    log_config("predict", json{{"model", model_path},
                               {"features", features_path},
                               {"rows", data.row_count}});

    std::string csv = "prediction,class_index,score\n";
    double mean_score = 0.0;
    std::size_t scored = 0;
    for (std::size_t i = 0; i < data.row_count; ++i) {
        const double prediction = model.predict(data.row(i));
        const int true_class = static_cast<int>(data.targets[i]);
        csv += mfts::format_double(prediction);
        csv += ',';
        csv += std::to_string(true_class);
        csv += ',';
        if (true_class >= 0) {
            const double score = mfts::class_score(prediction, true_class);
            csv += mfts::format_double(score);
            mean_score += score;
            ++scored;
        }
        csv += '\n';
    }
    if (out.empty()) {
        std::cout << csv;
    } else {
        const fs::path path = resolve_output(out);
        require_writable(path, force);
        mfts::write_text_file(path, csv);
    }
    if (scored > 0) {
        std::cerr << "[mfts] mean P over " << scored << " labeled rows: "
                  << mean_score / static_cast<double>(scored) << "\n";
    }
    return 0;
}

int run_experiment_cmd(const GlobalOptions& global, const std::string& plan_path,
                       const std::string& calibration_path, const std::string& out, bool dry_run,
                       bool force) {
    mfts::ExperimentPlan plan = mfts::plan_from_json(mfts::read_json_file(plan_path));
    const json resolved = mfts::plan_to_json(plan);
    log_config("experiment", resolved);
    if (dry_run) {
        std::cout << resolved.dump(2) << "\n";
        return 0;
    }

    mfts::CalibrationTable external;
    const mfts::CalibrationTable* external_ptr = nullptr;
    if (!calibration_path.empty()) {
        external = mfts::calibration_from_json(mfts::read_json_file(calibration_path));
        external_ptr = &external;
    }

    const fs::path out_dir = resolve_output(out);
    fs::create_directories(out_dir);
    const fs::path report_path = out_dir / "report.json";
    require_writable(report_path, force);

    const mfts::ExperimentResult result = mfts::run_experiment(plan, external_ptr, global.threads);

    mfts::write_json_file(report_path, mfts::report_to_json(result.report));
    mfts::write_json_file(out_dir / "timings.json", mfts::report_timings_to_json(result.report));
    mfts::write_json_file(out_dir / "plan_resolved.json", resolved);
    mfts::write_json_file(
        out_dir / "dataset_manifest.json",
        mfts::manifest_to_json(mfts::dataset_manifest(result.dataset, plan.series_length)));
    if (result.calibration_auto_built) {
        mfts::write_json_file(out_dir / "calibration.json",
                              mfts::calibration_to_json(*result.calibration));
    }
    const std::string table = mfts::render_report_table({result.report});
    mfts::write_text_file(out_dir / "table.txt", table);
    for (const mfts::ApproachResult& approach : result.report.approaches) {
        mfts::write_histogram_csv(
            out_dir / ("histogram_" + mfts::approach_name(approach.approach) + ".csv"), approach);
    }
    std::cout << table;
    std::cout << "report written to " << report_path.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multifractal time series classification toolkit"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--threads", global.threads, "worker thread cap (0 = all cores)");
    app.add_flag("-v,--verbose", global.verbose, "verbose logging");

    // generate
    auto* generate = app.add_subcommand("generate", "generate cascade series as CSV + manifest");
    int gen_n = 9;
    double gen_hurst = 0.0, gen_alpha = 0.0;
    int gen_count = 1;
    std::uint64_t gen_seed = 0;
    std::string gen_out = "cascades";
    bool gen_force = false;
    generate->add_option("--n", gen_n, "iteration count; series length is 2^n")
        ->required()
        ->check(CLI::Range(1, 30));
    auto* hurst_opt = generate->add_option("--hurst", gen_hurst, "target Hurst exponent in (0.5, 1)");
    auto* alpha_opt = generate->add_option("--alpha", gen_alpha, "symmetric Beta shape (alternative to --hurst)");
    hurst_opt->excludes(alpha_opt);
    generate->add_option("--count", gen_count, "number of series")->check(CLI::PositiveNumber);
    generate->add_option("--seed", gen_seed, "root seed");
    generate->add_option("--out", gen_out, "output directory");
    generate->add_flag("--force", gen_force, "overwrite existing outputs");

    // mfdfa
    auto* mfdfa_cmd = app.add_subcommand("mfdfa", "estimate h(q) for a series CSV");
    std::string mf_input, mf_out;
    int mf_poly = 2;
    bool mf_forward_only = false, mf_force = false;
    mfdfa_cmd->add_option("--input", mf_input, "series CSV")->required();
    mfdfa_cmd->add_option("--poly-order", mf_poly, "detrending polynomial order")
        ->check(CLI::Range(0, 8));
    mfdfa_cmd->add_flag("--forward-only", mf_forward_only, "disable backward segments");
    mfdfa_cmd->add_option("--out", mf_out, "write the result as JSON");
    mfdfa_cmd->add_flag("--force", mf_force, "overwrite existing outputs");

    // features
    auto* features_cmd = app.add_subcommand("features", "extract the 8-dimensional feature vector");
    std::vector<std::string> ft_inputs;
    std::string ft_manifest, ft_out = "features.csv";
    int ft_class = -1, ft_poly = 2;
    bool ft_force = false;
    features_cmd->add_option("--input", ft_inputs, "series CSV (repeatable)");
    features_cmd->add_option("--manifest", ft_manifest, "dataset manifest JSON");
    features_cmd->add_option("--class-index", ft_class, "class label for --input series");
    features_cmd->add_option("--poly-order", ft_poly, "detrending polynomial order");
    features_cmd->add_option("--out", ft_out, "output CSV");
    features_cmd->add_flag("--force", ft_force, "overwrite existing outputs");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "tabulate estimator bias and spread");
    std::vector<std::uint64_t> cal_lengths{512};
    std::vector<double> cal_h_grid;
    int cal_trials = 200, cal_poly = 2;
    std::uint64_t cal_seed = 0;
    std::string cal_out = "calibration.json";
    bool cal_force = false;
    calibrate->add_option("--lengths", cal_lengths, "series lengths (powers of two)")
        ->delimiter(',');
    calibrate->add_option("--trials", cal_trials, "trials per (length, H) cell");
    calibrate->add_option("--h-grid", cal_h_grid, "true H values")->delimiter(',');
    calibrate->add_option("--poly-order", cal_poly, "detrending polynomial order");
    calibrate->add_option("--seed", cal_seed, "root seed");
    calibrate->add_option("--out", cal_out, "output JSON");
    calibrate->add_flag("--force", cal_force, "overwrite existing outputs");

    // train
    auto* train = app.add_subcommand("train", "train a forest on a feature CSV");
    std::string tr_features, tr_mode = "random_forest", tr_out = "model.json";
    int tr_trees = 200;
    std::uint64_t tr_seed = 0;
    bool tr_force = false;
    train->add_option("--features", tr_features, "feature CSV with class_index column")->required();
    train->add_option("--mode", tr_mode, "random_forest | bagging")
        ->check(CLI::IsMember({"random_forest", "bagging"}));
    train->add_option("--trees", tr_trees, "ensemble size")->check(CLI::PositiveNumber);
    train->add_option("--seed", tr_seed, "root seed");
    train->add_option("--out", tr_out, "output model JSON");
    train->add_flag("--force", tr_force, "overwrite existing outputs");

    // predict
    auto* predict = app.add_subcommand("predict", "apply a trained model to a feature CSV");
    std::string pr_model, pr_features, pr_out;
    bool pr_force = false;
    predict->add_option("--model", pr_model, "model JSON")->required();
    predict->add_option("--features", pr_features, "feature CSV")->required();
    predict->add_option("--out", pr_out, "output CSV (default: stdout)");
    predict->add_flag("--force", pr_force, "overwrite existing outputs");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run a classification experiment plan");
    std::string ex_plan, ex_calibration, ex_out = "experiment_out";
    bool ex_dry = false, ex_force = false;
    experiment->add_option("--plan", ex_plan, "experiment plan JSON")->required();
    experiment->add_option("--calibration", ex_calibration, "calibration table JSON");
    experiment->add_option("--out", ex_out, "output directory");
    experiment->add_flag("--dry-run", ex_dry, "print the resolved plan and write nothing");
    experiment->add_flag("--force", ex_force, "overwrite existing outputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (generate->parsed()) {
            if (hurst_opt->count() == 0 && alpha_opt->count() == 0) {
                throw std::invalid_argument("generate: one of --hurst or --alpha is required");
            }
            return run_generate(global, gen_n, gen_hurst, gen_alpha, hurst_opt->count() > 0,
                                gen_count, gen_seed, gen_out, gen_force);
        }
        if (mfdfa_cmd->parsed()) {
            return run_mfdfa(global, mf_input, mf_poly, mf_forward_only, mf_out, mf_force);
        }
        if (features_cmd->parsed()) {
            return run_features(global, ft_inputs, ft_manifest, ft_class, ft_poly, ft_out,
                                ft_force);
        }
        if (calibrate->parsed()) {
            return run_calibrate(global, cal_lengths, cal_trials, cal_seed, cal_h_grid, cal_poly,
                                 cal_out, cal_force);
        }
        if (train->parsed()) {
            return run_train(global, tr_features, tr_mode, tr_trees, tr_seed, tr_out, tr_force);
        }
        if (predict->parsed()) {
            return run_predict(global, pr_model, pr_features, pr_out, pr_force);
        }
        if (experiment->parsed()) {
            return run_experiment_cmd(global, ex_plan, ex_calibration, ex_out, ex_dry, ex_force);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
