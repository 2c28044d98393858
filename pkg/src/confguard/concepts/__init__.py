from .crossval import CvReport, cross_validate, stratified_kfold
from .features import (
    CHAR_NGRAM_RANGE,
    FeatureConfig,
    NlpFeaturizer,
    TfidfFeaturizer,
    char_ngrams,
    nlp_features,
)
from .linear import OneVsRestLogisticRegression, gradient, objective
from .metrics import cohen_kappa, confusion_matrix, evaluate, matthews_corrcoef, mcc_from_confusion
from .model import (
    CONCEPT_LABELS,
    ConceptModel,
    load_labeled_csv,
    load_model,
    save_model,
)
from .preprocess import PreprocessConfig, load_stopwords, preprocess, stem

__all__ = [
    "CHAR_NGRAM_RANGE",
    "CONCEPT_LABELS",
    "ConceptModel",
    "CvReport",
    "FeatureConfig",
    "NlpFeaturizer",
    "OneVsRestLogisticRegression",
    "PreprocessConfig",
    "TfidfFeaturizer",
    "char_ngrams",
    "cohen_kappa",
    "confusion_matrix",
    "cross_validate",
    "evaluate",
    "gradient",
    "load_labeled_csv",
    "load_model",
    "load_stopwords",
    "matthews_corrcoef",
    "mcc_from_confusion",
    "nlp_features",
    "objective",
    "preprocess",
    "save_model",
    "stem",
    "stratified_kfold",
]
