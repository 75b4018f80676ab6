#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mfts/calibration.hpp"
#include "mfts/cascade.hpp"
#include "mfts/experiment.hpp"
#include "mfts/features.hpp"
#include "mfts/forest.hpp"
#include "mfts/io.hpp"
#include "mfts/mfdfa.hpp"
#include "mfts/random.hpp"

namespace py = pybind11;

namespace {

mfts::TrainingSet make_training_set(const std::vector<std::vector<double>>& rows,
                                    const std::vector<double>& targets) {
    if (rows.size() != targets.size()) {
        throw std::invalid_argument("rows and targets differ in length");
    }
    mfts::TrainingSet set;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        set.add_row(rows[i], targets[i]);
    }
    return set;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "multifractal time series classification core";

    // cascade
    py::class_<mfts::CascadeParams>(m, "CascadeParams")
        .def(py::init<>())
        .def(py::init([](int n, double alpha, double beta, std::uint64_t seed) {
                 mfts::CascadeParams p;
                 p.n = n;
                 p.alpha = alpha;
                 p.beta = beta;
                 p.seed = seed;
                 return p;
             }),
             py::arg("n"), py::arg("alpha"), py::arg("beta") = -1.0, py::arg("seed") = 0)
        .def_readwrite("n", &mfts::CascadeParams::n)
        .def_readwrite("alpha", &mfts::CascadeParams::alpha)
        .def_readwrite("beta", &mfts::CascadeParams::beta)
        .def_readwrite("seed", &mfts::CascadeParams::seed);
    m.def(
        "generate_cascade",
        [](int n, double alpha, double beta, std::uint64_t seed) {
            mfts::CascadeParams p;
            p.n = n;
            p.alpha = alpha;
            p.beta = beta < 0.0 ? alpha : beta;
            p.seed = seed;
            return mfts::generate_cascade(p);
        },
        py::arg("n"), py::arg("alpha"), py::arg("beta") = -1.0, py::arg("seed") = 0,
        "Conservative binomial multiplicative cascade of length 2^n");
    m.def("alpha_for_hurst", &mfts::alpha_for_hurst, py::arg("hurst"));
    m.def("hurst_for_alpha", &mfts::hurst_for_alpha, py::arg("alpha"));

    // mfdfa
    py::class_<mfts::MfdfaConfig>(m, "MfdfaConfig")
        .def_static("for_length", &mfts::MfdfaConfig::for_length, py::arg("length"),
                    py::arg("poly_order") = 2)
        .def_readwrite("poly_order", &mfts::MfdfaConfig::poly_order)
        .def_readwrite("tau_grid", &mfts::MfdfaConfig::tau_grid)
        .def_readwrite("q_grid", &mfts::MfdfaConfig::q_grid)
        .def_readwrite("use_backward_segments", &mfts::MfdfaConfig::use_backward_segments);
    py::class_<mfts::MfdfaResult>(m, "MfdfaResult")
        .def_readonly("q_grid", &mfts::MfdfaResult::q_grid)
        .def_readonly("h_of_q", &mfts::MfdfaResult::h_of_q)
        .def_readonly("fit_r2", &mfts::MfdfaResult::fit_r2)
        .def_readonly("tau_grid", &mfts::MfdfaResult::tau_grid)
        .def_readonly("fluctuation", &mfts::MfdfaResult::fluctuation)
        .def_readonly("low_confidence_q", &mfts::MfdfaResult::low_confidence_q)
        .def_readonly("degenerate_input", &mfts::MfdfaResult::degenerate_input)
        .def("h", &mfts::MfdfaResult::h, py::arg("q"))
        .def("hurst", &mfts::MfdfaResult::hurst);
    m.def("profile", &mfts::profile, py::arg("series"));
    m.def(
        "analyze",
        [](const mfts::TimeSeries& series, int poly_order) {
            return mfts::analyze(series, mfts::MfdfaConfig::for_length(series.size(), poly_order));
        },
        py::arg("series"), py::arg("poly_order") = 2, "MFDFA with the default grids");
    m.def(
        "estimate_hurst",
        [](const mfts::TimeSeries& series, int poly_order) {
            return mfts::estimate_hurst(series,
                                        mfts::MfdfaConfig::for_length(series.size(), poly_order));
        },
        py::arg("series"), py::arg("poly_order") = 2, "Hurst exponent estimate h(2)");

    // features
    py::class_<mfts::FeatureVector>(m, "FeatureVector")
        .def_readonly("std_dev", &mfts::FeatureVector::std_dev)
        .def_readonly("max_value", &mfts::FeatureVector::max_value)
        .def_readonly("median", &mfts::FeatureVector::median)
        .def_readonly("h_mean", &mfts::FeatureVector::h_mean)
        .def_readonly("h_std", &mfts::FeatureVector::h_std)
        .def_readonly("h1", &mfts::FeatureVector::h1)
        .def_readonly("h2", &mfts::FeatureVector::h2)
        .def_readonly("delta_h", &mfts::FeatureVector::delta_h)
        .def("values", &mfts::FeatureVector::values)
        .def_static("names", &mfts::FeatureVector::names);
    m.def("extract_features", &mfts::extract_features, py::arg("series"), py::arg("mfdfa_result"));

    // forest
    py::enum_<mfts::ForestMode>(m, "ForestMode")
        .value("bagging", mfts::ForestMode::bagging)
        .value("random_forest", mfts::ForestMode::random_forest);
    py::class_<mfts::ForestModel>(m, "ForestModel")
        .def_readonly("features_per_split", &mfts::ForestModel::features_per_split)
        .def_readonly("tree_count", &mfts::ForestModel::tree_count)
        .def_readonly("feature_count", &mfts::ForestModel::feature_count)
        .def_readonly("oob_mse", &mfts::ForestModel::oob_mse)
        .def("predict",
             [](const mfts::ForestModel& model, const std::vector<double>& features) {
                 return model.predict(features);
             })
        .def("to_json", [](const mfts::ForestModel& model) {
            return mfts::forest_to_json(model).dump();
        });
    m.def(
        "fit_forest",
        [](const std::vector<std::vector<double>>& rows, const std::vector<double>& targets,
           mfts::ForestMode mode, int trees, std::uint64_t seed, int threads) {
            mfts::ForestOptions options;
            options.mode = mode;
            options.tree_count = trees;
            options.seed = seed;
            options.threads = threads;
            return mfts::fit_forest(make_training_set(rows, targets), options);
        },
        py::arg("rows"), py::arg("targets"), py::arg("mode") = mfts::ForestMode::random_forest,
        py::arg("trees") = 200, py::arg("seed") = 0, py::arg("threads") = 0);
    m.def("load_forest", [](const std::string& text) {
        return mfts::forest_from_json(nlohmann::json::parse(text));
    });
    m.def("class_score", &mfts::class_score, py::arg("prediction"), py::arg("true_class"));
    m.def("predicted_class", &mfts::predicted_class, py::arg("prediction"), py::arg("class_count"));

    // schemes and calibration
    py::class_<mfts::ClassInterval>(m, "ClassInterval")
        .def_readonly("lower", &mfts::ClassInterval::lower)
        .def_readonly("upper", &mfts::ClassInterval::upper)
        .def_readonly("index", &mfts::ClassInterval::index);
    py::class_<mfts::HurstClassScheme>(m, "HurstClassScheme")
        .def_readonly("intervals", &mfts::HurstClassScheme::intervals)
        .def("class_of", &mfts::HurstClassScheme::class_of, py::arg("hurst"))
        .def("class_count", &mfts::HurstClassScheme::class_count);
    m.def("two_class_scheme", &mfts::two_class_scheme);
    m.def("eleven_class_scheme", &mfts::eleven_class_scheme);
    m.def("scheme_from_boundaries", &mfts::scheme_from_boundaries, py::arg("boundaries"));

    py::class_<mfts::CalibrationTable>(m, "CalibrationTable")
        .def("delta", [](const mfts::CalibrationTable& t, std::uint64_t n) { return t.at(n).delta; })
        .def("s", [](const mfts::CalibrationTable& t, std::uint64_t n) { return t.at(n).s; })
        .def("to_json", [](const mfts::CalibrationTable& t) {
            return mfts::calibration_to_json(t).dump();
        });
    m.def("load_calibration", [](const std::string& text) {
        return mfts::calibration_from_json(nlohmann::json::parse(text));
    });
    m.def(
        "build_calibration",
        [](const std::vector<std::uint64_t>& lengths, int trials, std::uint64_t seed, int threads) {
            mfts::CalibrationOptions options;
            options.lengths = lengths;
            options.trials_per_cell = trials;
            options.seed = seed;
            options.threads = threads;
            return mfts::build_calibration(options);
        },
        py::arg("lengths"), py::arg("trials") = 200, py::arg("seed") = 0, py::arg("threads") = 0);
    py::class_<mfts::ConfidenceInterval>(m, "ConfidenceInterval")
        .def_readonly("lower", &mfts::ConfidenceInterval::lower)
        .def_readonly("upper", &mfts::ConfidenceInterval::upper)
        .def_readonly("center", &mfts::ConfidenceInterval::center)
        .def_readonly("alpha_level", &mfts::ConfidenceInterval::alpha_level)
        .def_readonly("t_quantile", &mfts::ConfidenceInterval::t_quantile);
    m.def("confidence_interval", &mfts::confidence_interval, py::arg("h_hat"), py::arg("length"),
          py::arg("alpha_level"), py::arg("table"));
    py::class_<mfts::IntervalClassification>(m, "IntervalClassification")
        .def_readonly("class_mass", &mfts::IntervalClassification::class_mass)
        .def_readonly("tail_low", &mfts::IntervalClassification::tail_low)
        .def_readonly("tail_high", &mfts::IntervalClassification::tail_high)
        .def_readonly("predicted_class", &mfts::IntervalClassification::predicted_class)
        .def_readonly("interval", &mfts::IntervalClassification::interval);
    m.def("classify_by_interval", &mfts::classify_by_interval, py::arg("h_hat"), py::arg("length"),
          py::arg("alpha_level"), py::arg("table"), py::arg("scheme"));

    // experiment
    m.def(
        "run_experiment",
        [](const std::string& plan_json, int threads) {
            const mfts::ExperimentPlan plan =
                mfts::plan_from_json(nlohmann::json::parse(plan_json));
            const mfts::ExperimentResult result = mfts::run_experiment(plan, nullptr, threads);
            return mfts::report_to_json(result.report).dump();
        },
        py::arg("plan_json"), py::arg("threads") = 0,
        "Runs an experiment plan (JSON string) and returns the report as JSON");

    m.def("derive_seed", &mfts::derive_seed, py::arg("root"), py::arg("tag"), py::arg("a") = 0,
          py::arg("b") = 0);
}
