"""Primal SGD for the L2-regularized hinge loss (Pegasos schedule)."""

from dataclasses import dataclass, field

import numpy as np

from cohypo._rng import derive_seed
from cohypo.errors import ContractError


@dataclass(frozen=True)
class PegasosConfig:
    lambda_: float = 1e-4
    epochs: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.lambda_ <= 0 or self.epochs < 1:
            raise ContractError("need lambda_ > 0 and epochs >= 1")


@dataclass
class LinearSvmModel:
    weights: np.ndarray
    bias: float
    config: dict = field(default_factory=dict)

    def decision_function(self, X):
        return np.asarray(X, dtype=np.float64) @ self.weights + self.bias

    def predict(self, X):
        # decision exactly 0 resolves to the negative ("other") class
        return (self.decision_function(X) > 0).astype(np.int64)


def train_linear_svm(X, y, cfg=PegasosConfig()):
    """Train with step size 1/(lambda * t); the bias term is unregularized."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n = X.shape[0]
    if n < 2:
        raise ContractError("need at least 2 training rows")
    if np.unique(y).size < 2:
        raise ContractError("training data contains a single class")

    signed = np.where(y > 0, 1.0, -1.0)
    w = np.zeros(X.shape[1], dtype=np.float64)
    b = 0.0
    rng = np.random.default_rng(derive_seed(cfg.seed, "pegasos"))
    t = 0
    for _ in range(cfg.epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (cfg.lambda_ * t)
            margin = signed[i] * (X[i] @ w + b)
            w *= 1.0 - eta * cfg.lambda_
            if margin < 1.0:
                w += (eta * signed[i]) * X[i]
                b += eta * signed[i]
    return LinearSvmModel(w, float(b),
                          {"lambda_": cfg.lambda_, "epochs": cfg.epochs, "seed": cfg.seed})


def svm_objective(weights, bias, X, y, lambda_):
    """Regularized hinge objective: lambda/2 ||w||^2 + mean hinge loss."""
    signed = np.where(np.asarray(y) > 0, 1.0, -1.0)
    margins = signed * (np.asarray(X, dtype=np.float64) @ weights + bias)
    hinge = np.maximum(0.0, 1.0 - margins)
    return 0.5 * lambda_ * float(weights @ weights) + float(hinge.mean())
