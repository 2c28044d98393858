"""Stratified k-fold cross-validation and its report type.

The harness is model-agnostic: anything with fit/predict and get_params
can be scored, and the feature model is always fitted on the training
folds only.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from ..errors import ValidationError
from .features import FeatureConfig, NlpFeaturizer, TfidfFeaturizer
from .linear import OneVsRestLogisticRegression
from .metrics import MetricsReport, evaluate
from .preprocess import PreprocessConfig, preprocess


def stratified_kfold(labels: Sequence, k: int, seed: int = 42) -> list[tuple[list[int], list[int]]]:
    """Partition indices into k folds with per-class counts within 1 of
    exact proportion. Deterministic for a given seed."""
    if k < 2:
        raise ValidationError("k must be at least 2")
    by_class: dict = {}
    for i, label in enumerate(labels):
        by_class.setdefault(label, []).append(i)
    for label, members in sorted(by_class.items()):
        if len(members) < k:
            raise ValidationError(f"class {label!r} has {len(members)} members, fewer than k={k}")
    rng = random.Random(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for label in sorted(by_class):
        members = list(by_class[label])
        rng.shuffle(members)
        for j, index in enumerate(members):
            folds[(offset + j) % k].append(index)
        offset = (offset + len(members)) % k
    splits = []
    for i in range(k):
        validation = sorted(folds[i])
        train = sorted(idx for j in range(k) if j != i for idx in folds[j])
        splits.append((train, validation))
    return splits


@dataclass(frozen=True)
class FoldResult:
    fold: int
    metrics: MetricsReport

    def to_dict(self) -> dict:
        return {"fold": self.fold, **self.metrics.to_dict()}


@dataclass(frozen=True)
class CvReport:
    k: int
    seed: int
    feature_mode: str
    folds: tuple[FoldResult, ...]
    mean_mcc: float
    mean_accuracy: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "feature_mode": self.feature_mode,
            "folds": [f.to_dict() for f in self.folds],
            "mean_mcc": self.mean_mcc,
            "mean_accuracy": self.mean_accuracy,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


ModelFactory = Callable[[int], object]


def _default_factory(seed: int):
    return OneVsRestLogisticRegression(seed=seed)


def cross_validate(
    texts: Sequence[str],
    labels: Sequence[str],
    k: int = 10,
    seed: int = 42,
    preprocess_cfg: PreprocessConfig | None = None,
    feature_cfg: FeatureConfig | None = None,
    model_factory: ModelFactory = _default_factory,
) -> CvReport:
    """Run stratified k-fold CV; features are re-fitted inside every fold."""
    if len(texts) != len(labels):
        raise ValidationError("texts and labels differ in length")
    preprocess_cfg = preprocess_cfg or PreprocessConfig()
    feature_cfg = feature_cfg or FeatureConfig()
    token_lists = [preprocess(t, preprocess_cfg) for t in texts]
    results: list[FoldResult] = []
    for fold, (train_idx, val_idx) in enumerate(stratified_kfold(labels, k, seed)):
        if feature_cfg.mode == "nlp":
            featurizer = NlpFeaturizer().fit([texts[i] for i in train_idx])
            x_train = featurizer.transform([texts[i] for i in train_idx])
            x_val = featurizer.transform([texts[i] for i in val_idx])
        else:
            featurizer = TfidfFeaturizer(feature_cfg.mode, feature_cfg.min_df)
            featurizer.fit([token_lists[i] for i in train_idx])
            x_train = featurizer.transform([token_lists[i] for i in train_idx])
            x_val = featurizer.transform([token_lists[i] for i in val_idx])
        model = model_factory(seed * 1000 + fold)
        model.fit(x_train, [labels[i] for i in train_idx])
        predicted = list(model.predict(x_val))
        results.append(FoldResult(fold, evaluate([labels[i] for i in val_idx], predicted)))
    mean_mcc = sum(r.metrics.mcc for r in results) / k
    mean_accuracy = sum(r.metrics.accuracy for r in results) / k
    return CvReport(k, seed, feature_cfg.mode, tuple(results), mean_mcc, mean_accuracy)
