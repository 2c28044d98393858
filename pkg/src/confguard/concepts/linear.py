"""One-vs-rest L2-regularized logistic regression trained by batch
gradient descent with backtracking line search.

The per-class objective is

    J(w, b) = (1 / C) * ||w||^2 / 2 + sum_i log(1 + exp(-y_i (w . x_i + b)))

with labels y in {-1, +1}; the bias is unregularized. Optimization stops
when the gradient norm falls below `tol` or after `max_iter` iterations,
whichever comes first.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from ..errors import ValidationError

_ARMIJO_C1 = 1e-4
_MAX_BACKTRACKS = 60


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def objective(w: np.ndarray, b: float, X, y_signed: np.ndarray, C: float) -> float:
    """Regularized logistic loss for one binary subproblem."""
    margins = y_signed * (X @ w + b)
    loss = float(np.sum(np.logaddexp(0.0, -margins)))
    return 0.5 * float(w @ w) / C + loss


def gradient(w: np.ndarray, b: float, X, y_signed: np.ndarray, C: float) -> tuple[np.ndarray, float]:
    """Analytic gradient of `objective` with respect to (w, b)."""
    margins = y_signed * (X @ w + b)
    coeff = -y_signed * _sigmoid(-margins)
    grad_w = X.T @ coeff + w / C
    grad_w = np.asarray(grad_w).ravel()
    grad_b = float(np.sum(coeff))
    return grad_w, grad_b


def _fit_binary(X, y_signed: np.ndarray, C: float, max_iter: int, tol: float):
    n, dim = X.shape
    w = np.zeros(dim)
    b = 0.0
    # Cache X @ w and X @ grad_w so line-search probes cost O(n), not O(nnz).
    z = np.zeros(n)
    reg = 0.5 * float(w @ w) / C
    iterations = 0
    step = 1.0
    for iterations in range(1, max_iter + 1):
        margins = y_signed * (z + b)
        coeff = -y_signed * _sigmoid(-margins)
        grad_w = np.asarray(X.T @ coeff).ravel() + w / C
        grad_b = float(np.sum(coeff))
        grad_norm = float(np.sqrt(grad_w @ grad_w + grad_b * grad_b))
        if grad_norm <= tol:
            iterations -= 1
            break
        f0 = reg + float(np.sum(np.logaddexp(0.0, -margins)))
        xg = np.asarray(X @ grad_w).ravel()
        gsq = grad_norm * grad_norm
        # Warm-start the step from the last accepted one; try growing it once.
        step = min(step * 2.0, 1.0)
        for _ in range(_MAX_BACKTRACKS):
            w_try = w - step * grad_w
            b_try = b - step * grad_b
            z_try = z - step * xg
            f_try = 0.5 * float(w_try @ w_try) / C + float(
                np.sum(np.logaddexp(0.0, -y_signed * (z_try + b_try)))
            )
            if f_try <= f0 - _ARMIJO_C1 * step * gsq:
                break
            step *= 0.5
        w, b, z = w_try, b_try, z_try
        reg = 0.5 * float(w @ w) / C
    return w, b, iterations


class OneVsRestLogisticRegression(BaseEstimator, ClassifierMixin):
    """Multi-class wrapper: one sigmoid-scored binary model per class.

    Weights start at zero and the optimizer is deterministic, so equal
    inputs always produce bit-equal models; `seed` is recorded with the
    training metadata for provenance.
    """

    def __init__(self, C: float = 2.60, max_iter: int = 582, tol: float = 9.95e-5, seed: int = 42):
        self.C = C
        self.max_iter = max_iter
        self.tol = tol
        self.seed = seed

    def fit(self, X, y) -> "OneVsRestLogisticRegression":
        X = sparse.csr_matrix(X, dtype=np.float64)
        labels = np.asarray(y, dtype=object)
        if X.shape[0] != len(labels):
            raise ValidationError("feature matrix and labels disagree on sample count")
        if X.shape[1] == 0:
            raise ValidationError("feature dimension must be positive")
        classes = sorted(set(labels))
        if len(classes) < 2:
            raise ValidationError("training data must contain at least two classes")
        self.classes_ = np.array(classes, dtype=object)
        coef = np.zeros((len(classes), X.shape[1]))
        intercept = np.zeros(len(classes))
        n_iter = np.zeros(len(classes), dtype=int)
        for k, cls in enumerate(classes):
            y_signed = np.where(labels == cls, 1.0, -1.0)
            coef[k], intercept[k], n_iter[k] = _fit_binary(
                X, y_signed, self.C, self.max_iter, self.tol
            )
        self.coef_ = coef
        self.intercept_ = intercept
        self.n_iter_ = n_iter
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "coef_"):
            raise NotFittedError("classifier is not fitted")

    def decision_function(self, X) -> np.ndarray:
        self._check_fitted()
        X = sparse.csr_matrix(X, dtype=np.float64)
        if X.shape[1] != self.coef_.shape[1]:
            raise ValidationError(
                f"feature dimension {X.shape[1]} does not match model dimension {self.coef_.shape[1]}"
            )
        return np.asarray(X @ self.coef_.T) + self.intercept_

    def predict_scores(self, X) -> np.ndarray:
        """Raw per-class sigmoid scores; deliberately not renormalized."""
        return _sigmoid(self.decision_function(X))

    def predict(self, X) -> np.ndarray:
        scores = self.predict_scores(X)
        # argmax breaks ties toward the lexicographically smallest class
        # because classes_ is sorted.
        return self.classes_[np.argmax(scores, axis=1)]
