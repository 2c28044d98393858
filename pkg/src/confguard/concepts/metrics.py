"""Classification metrics: accuracy, per-class precision/recall/f1,
multi-class Matthews correlation and Cohen's kappa."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ValidationError


def _check_lengths(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise ValidationError(f"label sequences differ in length: {len(a)} vs {len(b)}")


def confusion_matrix(truth: Sequence, predicted: Sequence, classes: Sequence) -> np.ndarray:
    index = {c: i for i, c in enumerate(classes)}
    matrix = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for t, p in zip(truth, predicted):
        matrix[index[t], index[p]] += 1
    return matrix


def mcc_from_confusion(matrix: np.ndarray) -> float:
    """Generalized correlation over the full confusion matrix.

    Reduces to the familiar binary formula for 2x2 inputs; a zero
    denominator factor yields 0 by convention.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    total = matrix.sum()
    correct = np.trace(matrix)
    truth_counts = matrix.sum(axis=1)
    pred_counts = matrix.sum(axis=0)
    cov = correct * total - float(truth_counts @ pred_counts)
    denom_t = total * total - float(truth_counts @ truth_counts)
    denom_p = total * total - float(pred_counts @ pred_counts)
    if denom_t <= 0 or denom_p <= 0:
        return 0.0
    return cov / float(np.sqrt(denom_t) * np.sqrt(denom_p))


def matthews_corrcoef(truth: Sequence, predicted: Sequence) -> float:
    _check_lengths(truth, predicted)
    classes = sorted(set(truth) | set(predicted))
    return mcc_from_confusion(confusion_matrix(truth, predicted, classes))


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    per_class: dict[str, ClassMetrics]
    mcc: float

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "per_class": {
                c: {"precision": m.precision, "recall": m.recall, "f1": m.f1}
                for c, m in self.per_class.items()
            },
            "mcc": self.mcc,
        }


def evaluate(truth: Sequence, predicted: Sequence) -> MetricsReport:
    """Score predictions; classes absent from both sequences are excluded."""
    _check_lengths(truth, predicted)
    if not truth:
        raise ValidationError("cannot evaluate empty label sequences")
    classes = sorted(set(truth) | set(predicted))
    matrix = confusion_matrix(truth, predicted, classes)
    accuracy = float(np.trace(matrix)) / float(matrix.sum())
    per_class: dict[str, ClassMetrics] = {}
    for i, cls in enumerate(classes):
        tp = float(matrix[i, i])
        fp = float(matrix[:, i].sum() - tp)
        fn = float(matrix[i, :].sum() - tp)
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        per_class[str(cls)] = ClassMetrics(precision, recall, f1)
    return MetricsReport(accuracy, per_class, mcc_from_confusion(matrix))


def cohen_kappa(labels_a: Sequence, labels_b: Sequence) -> float:
    """Chance-corrected agreement between two labelings of the same items."""
    _check_lengths(labels_a, labels_b)
    if not labels_a:
        raise ValidationError("cannot compute kappa on empty sequences")
    n = len(labels_a)
    observed = sum(a == b for a, b in zip(labels_a, labels_b)) / n
    classes = sorted(set(labels_a) | set(labels_b))
    expected = 0.0
    for cls in classes:
        pa = sum(a == cls for a in labels_a) / n
        pb = sum(b == cls for b in labels_b) / n
        expected += pa * pb
    if expected == 1.0:
        return 1.0
    return (observed - expected) / (1.0 - expected)
