"""Texture features and fuzzy nearest-neighbour classifiers for
benign/malignant mass classification on grayscale ROIs."""

from .classifiers import (
    KINDS,
    ClassifierConfig,
    Dataset,
    FitModel,
    Prediction,
    fit,
    kneighbors,
    predict,
    predict_fknn,
    predict_fknne,
    predict_knn,
    predict_knne,
)
from .evaluation import (
    ComparisonRow,
    ComparisonTable,
    ConfusionCounts,
    EvaluationReport,
    FoldResult,
    Holdout,
    KFold,
    Loocv,
    RocCurve,
    auc,
    compare_classifiers,
    confusion,
    evaluate,
    loocv,
    rates,
    roc_curve,
    stratified_kfold,
)
from .formats import (
    feature_csv_text,
    read_feature_csv,
    report_json_text,
    roc_csv_text,
    write_feature_csv,
    write_roc_csv,
)
from .ingestion import (
    BENIGN,
    MALIGNANT,
    GrayImage,
    RoiSpec,
    crop_roi,
    minmax_normalize,
    parse_mias_index,
    quantize,
    read_pgm,
    write_pgm,
)
from .synthetic import textured_image, two_cluster_dataset
from .texture import (
    DIRECTIONS,
    FEATURE_NAMES,
    ExtractionConfig,
    FeatureVector,
    Glcm,
    Gldm,
    Glrlm,
    compute_glcm,
    compute_gldm,
    compute_glrlm,
    extract_all,
    gldm_features,
    haralick_features,
    runlength_features,
)

__version__ = "0.1.0"

__all__ = [
    "BENIGN",
    "MALIGNANT",
    "DIRECTIONS",
    "FEATURE_NAMES",
    "KINDS",
    "ClassifierConfig",
    "ComparisonRow",
    "ComparisonTable",
    "ConfusionCounts",
    "Dataset",
    "EvaluationReport",
    "ExtractionConfig",
    "FeatureVector",
    "FitModel",
    "FoldResult",
    "Glcm",
    "Gldm",
    "Glrlm",
    "GrayImage",
    "Holdout",
    "KFold",
    "Loocv",
    "Prediction",
    "RocCurve",
    "RoiSpec",
    "auc",
    "compare_classifiers",
    "compute_glcm",
    "compute_gldm",
    "compute_glrlm",
    "confusion",
    "crop_roi",
    "evaluate",
    "extract_all",
    "feature_csv_text",
    "fit",
    "gldm_features",
    "haralick_features",
    "kneighbors",
    "loocv",
    "minmax_normalize",
    "parse_mias_index",
    "predict",
    "predict_fknn",
    "predict_fknne",
    "predict_knn",
    "predict_knne",
    "quantize",
    "rates",
    "read_feature_csv",
    "read_pgm",
    "report_json_text",
    "roc_csv_text",
    "roc_curve",
    "runlength_features",
    "stratified_kfold",
    "textured_image",
    "two_cluster_dataset",
    "write_feature_csv",
    "write_pgm",
    "write_roc_csv",
]
