"""Multifractal time series classification: binomial cascades, MFDFA,
estimator calibration and random-forest classification."""

from mfts._core import (
    CalibrationTable,
    CascadeParams,
    ClassInterval,
    ConfidenceInterval,
    FeatureVector,
    ForestMode,
    ForestModel,
    HurstClassScheme,
    IntervalClassification,
    MfdfaConfig,
    MfdfaResult,
    alpha_for_hurst,
    analyze,
    build_calibration,
    class_score,
    classify_by_interval,
    confidence_interval,
    derive_seed,
    eleven_class_scheme,
    estimate_hurst,
    extract_features,
    fit_forest,
    generate_cascade,
    hurst_for_alpha,
    load_calibration,
    load_forest,
    predicted_class,
    profile,
    run_experiment,
    scheme_from_boundaries,
    two_class_scheme,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationTable",
    "CascadeParams",
    "ClassInterval",
    "ConfidenceInterval",
    "FeatureVector",
    "ForestMode",
    "ForestModel",
    "HurstClassScheme",
    "IntervalClassification",
    "MfdfaConfig",
    "MfdfaResult",
    "alpha_for_hurst",
    "analyze",
    "build_calibration",
    "class_score",
    "classify_by_interval",
    "confidence_interval",
    "derive_seed",
    "eleven_class_scheme",
    "estimate_hurst",
    "extract_features",
    "fit_forest",
    "generate_cascade",
    "hurst_for_alpha",
    "load_calibration",
    "load_forest",
    "predicted_class",
    "profile",
    "run_experiment",
    "scheme_from_boundaries",
    "two_class_scheme",
]
