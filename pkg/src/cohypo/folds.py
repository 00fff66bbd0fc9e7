"""Stratified k-fold assignment."""

import numpy as np

from cohypo._rng import derive_seed
from cohypo.errors import ContractError


def stratified_kfold(labels, k=10, seed=0):
    """Assign each record a fold id in [0, k), preserving class balance.

    Records are shuffled within each class, then dealt round-robin, so fold
    class counts differ by at most one from perfect stratification.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if k < 2:
        raise ContractError("k must be >= 2")
    assignments = np.full(labels.size, -1, dtype=np.int64)
    for cls in np.unique(labels):
        members = np.nonzero(labels == cls)[0]
        if members.size < k:
            raise ContractError(
                f"class {cls} has {members.size} records, fewer than k={k}")
        rng = np.random.default_rng(derive_seed(seed, "fold", int(cls)))
        perm = rng.permutation(members)
        assignments[perm] = np.arange(perm.size) % k
    return assignments
