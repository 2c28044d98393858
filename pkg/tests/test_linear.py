import numpy as np
import pytest
from scipy import sparse

from confguard.concepts.linear import OneVsRestLogisticRegression, gradient, objective
from confguard.errors import ValidationError

SEPARABLE_X = np.array([[1.0, 0.0], [0.9, 0.1], [0.0, 1.0], [0.1, 0.9]])
SEPARABLE_Y = ["pos", "pos", "neg", "neg"]


def test_separable_toy_set_fits_perfectly():
    model = OneVsRestLogisticRegression().fit(SEPARABLE_X, SEPARABLE_Y)
    assert list(model.predict(SEPARABLE_X)) == SEPARABLE_Y


def finite_difference(w, b, X, y, C, h=1e-5):
    grad_w = np.zeros_like(w)
    for i in range(len(w)):
        up, down = w.copy(), w.copy()
        up[i] += h
        down[i] -= h
        grad_w[i] = (objective(up, b, X, y, C) - objective(down, b, X, y, C)) / (2 * h)
    grad_b = (objective(w, b + h, X, y, C) - objective(w, b - h, X, y, C)) / (2 * h)
    return grad_w, grad_b


def test_gradient_matches_central_differences():
    rng = np.random.RandomState(7)
    worst = 0.0
    for _ in range(20):
        n, d = rng.randint(5, 20), rng.randint(2, 8)
        X = rng.randn(n, d)
        y = np.where(rng.rand(n) > 0.5, 1.0, -1.0)
        w = rng.randn(d)
        b = float(rng.randn())
        C = float(rng.uniform(0.5, 5.0))
        gw, gb = gradient(w, b, X, y, C)
        nw, nb = finite_difference(w, b, X, y, C)
        denom = np.maximum(np.abs(nw) + np.abs(gw), 1e-8)
        worst = max(worst, float(np.max(np.abs(gw - nw) / denom)), abs(gb - nb) / max(abs(nb) + abs(gb), 1e-8))
    assert worst < 1e-4


def test_duplicating_samples_keeps_decision_function():
    X = np.array([[1.0, 0.1], [0.8, 0.2], [0.1, 0.9], [0.2, 1.0], [0.5, 0.45], [0.45, 0.5]])
    y = ["pos", "pos", "neg", "neg", "pos", "neg"]
    single = OneVsRestLogisticRegression().fit(X, y)
    doubled = OneVsRestLogisticRegression().fit(np.vstack([X, X]), y + y)
    grid = np.array([[a / 10, b / 10] for a in range(11) for b in range(11)])
    assert list(single.predict(grid)) == list(doubled.predict(grid))


def test_zero_weights_tie_break_is_lexicographic():
    model = OneVsRestLogisticRegression()
    model.classes_ = np.array(["action", "goal", "other", "statement"], dtype=object)
    model.coef_ = np.zeros((4, 3))
    model.intercept_ = np.zeros(4)
    model.n_iter_ = np.zeros(4, dtype=int)
    scores = model.predict_scores(np.zeros((1, 3)))
    assert np.allclose(scores, 0.5)
    assert model.predict(np.zeros((1, 3)))[0] == "action"


def test_scores_are_raw_sigmoids():
    model = OneVsRestLogisticRegression().fit(SEPARABLE_X, SEPARABLE_Y)
    scores = model.predict_scores(SEPARABLE_X)
    assert np.all((scores > 0) & (scores < 1))
    assert not np.allclose(scores.sum(axis=1), 1.0)  # deliberately not renormalized


def test_single_class_rejected():
    with pytest.raises(ValidationError):
        OneVsRestLogisticRegression().fit(SEPARABLE_X, ["same"] * 4)


def test_dimension_mismatch_rejected():
    model = OneVsRestLogisticRegression().fit(SEPARABLE_X, SEPARABLE_Y)
    with pytest.raises(ValidationError):
        model.predict(np.zeros((1, 5)))


def test_training_is_deterministic():
    a = OneVsRestLogisticRegression().fit(SEPARABLE_X, SEPARABLE_Y)
    b = OneVsRestLogisticRegression().fit(SEPARABLE_X, SEPARABLE_Y)
    assert np.array_equal(a.coef_, b.coef_)
    assert np.array_equal(a.intercept_, b.intercept_)
    assert np.array_equal(a.n_iter_, b.n_iter_)


def test_iteration_cap_respected():
    model = OneVsRestLogisticRegression(max_iter=3).fit(SEPARABLE_X, SEPARABLE_Y)
    assert np.all(model.n_iter_ <= 3)


def test_sparse_input_accepted():
    X = sparse.csr_matrix(SEPARABLE_X)
    model = OneVsRestLogisticRegression().fit(X, SEPARABLE_Y)
    assert list(model.predict(X)) == SEPARABLE_Y


def test_table_defaults():
    model = OneVsRestLogisticRegression()
    assert model.C == 2.60
    assert model.max_iter == 582
    assert model.tol == 9.95e-5
    assert model.get_params()["seed"] == 42
