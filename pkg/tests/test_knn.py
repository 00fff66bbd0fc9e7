import numpy as np
import pytest

from cohypo.classifiers import KnnModel, knn_predict
from cohypo.errors import ContractError


def brute_force_knn(X, y, query, k):
    scored = sorted(
        ((float(np.linalg.norm(row - query)), i, int(label))
         for i, (row, label) in enumerate(zip(X, y))),
        key=lambda t: (t[0], t[1]),
    )
    votes = [label for _, _, label in scored[:k]]
    ones = sum(votes)
    return 1 if 2 * ones > k else 0


def test_k1_returns_exact_match_label(rng):
    X = rng.normal(size=(8, 3))
    y = rng.integers(0, 2, size=8)
    for i in range(8):
        assert knn_predict(X, y, X[i], 1) == y[i]


def test_k_equals_n_returns_global_majority(rng):
    X = rng.normal(size=(9, 2))
    y = np.array([1, 1, 1, 1, 1, 0, 0, 0, 0])
    for q in rng.normal(size=(5, 2)):
        assert knn_predict(X, y, q, 9) == 1


def test_matches_brute_force_oracle(rng):
    X = rng.normal(size=(10, 4))
    y = rng.integers(0, 2, size=10)
    for k in (1, 3, 5, 10):
        for q in rng.normal(size=(6, 4)):
            assert knn_predict(X, y, q, k) == brute_force_knn(X, y, q, k)


def test_distance_ties_break_by_row_index():
    X = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])  # rows 0 and 2 identical
    y = np.array([1, 0, 0])
    # query equidistant from rows 0 and 2; k=1 must pick row 0
    assert knn_predict(X, y, np.array([1.0, 0.0]), 1) == 1


def test_vote_tie_resolves_to_negative():
    X = np.array([[0.0], [1.0]])
    y = np.array([1, 0])
    assert knn_predict(X, y, np.array([0.5]), 2) == 0


def test_training_accuracy_one_with_k1_unique_rows(rng):
    X = rng.normal(size=(20, 3))
    y = rng.integers(0, 2, size=20)
    model = KnnModel(X, y, 1)
    assert (model.predict(X) == y).mean() == 1.0


def test_contracts(rng):
    with pytest.raises(ContractError):
        knn_predict(np.zeros((0, 2)), np.zeros(0, dtype=int), np.zeros(2), 1)
    with pytest.raises(ContractError):
        knn_predict(np.zeros((3, 2)), np.zeros(3, dtype=int), np.zeros(2), 4)
    with pytest.raises(ContractError):
        KnnModel(np.zeros((3, 2)), np.zeros(3, dtype=int), 0)
