"""k-nearest-neighbour classification by Euclidean distance."""

from dataclasses import dataclass, field

import numpy as np

from cohypo.errors import ContractError


def knn_predict(train_X, train_y, query, k):
    """Majority label among the k nearest rows.

    Distance ties break toward the lower row index; vote ties resolve to 0.
    """
    X = np.asarray(train_X, dtype=np.float64)
    y = np.asarray(train_y, dtype=np.int64)
    if X.shape[0] == 0:
        raise ContractError("empty training set")
    if not 1 <= k <= X.shape[0]:
        raise ContractError(f"k={k} out of range for {X.shape[0]} training rows")
    dist = np.linalg.norm(X - np.asarray(query, dtype=np.float64), axis=1)
    order = np.lexsort((np.arange(X.shape[0]), dist))
    ones = int(y[order[:k]].sum())
    return 1 if 2 * ones > k else 0


@dataclass
class KnnModel:
    train_X: np.ndarray
    train_y: np.ndarray
    k: int
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        self.train_X = np.asarray(self.train_X, dtype=np.float64)
        self.train_y = np.asarray(self.train_y, dtype=np.int64)
        if self.train_X.shape[0] == 0:
            raise ContractError("empty training set")
        if not 1 <= self.k <= self.train_X.shape[0]:
            raise ContractError(f"k={self.k} out of range")

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        return np.array([knn_predict(self.train_X, self.train_y, q, self.k) for q in X],
                        dtype=np.int64)
