"""Alias tables for O(1) sampling from fixed categorical distributions."""

import numpy as np

from cohypo.errors import ContractError


def build_alias(weights):
    """Build an alias table from non-negative weights.

    Returns (prob, alias) where prob is float64 and alias int32, both of
    length len(weights). Construction uses LIFO worklists in ascending index
    order, so the result is deterministic for a given weight vector.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ContractError("alias table needs a non-empty 1-D weight vector")
    total = w.sum()
    if not np.isfinite(total) or total <= 0 or (w < 0).any():
        raise ContractError("alias weights must be non-negative with positive sum")

    k = w.size
    scaled = w * (k / total)
    prob = np.ones(k, dtype=np.float64)
    alias = np.arange(k, dtype=np.int32)

    small = [i for i in range(k) if scaled[i] < 1.0]
    large = [i for i in range(k) if scaled[i] >= 1.0]
    while small and large:
        s = small.pop()
        l = large.pop()
        prob[s] = scaled[s]
        alias[s] = l
        scaled[l] -= 1.0 - scaled[s]
        if scaled[l] < 1.0:
            small.append(l)
        else:
            large.append(l)
    # leftovers are exactly-1 columns up to float round-off
    for i in small:
        prob[i] = 1.0
    for i in large:
        prob[i] = 1.0
    return prob, alias


def alias_to_probs(prob, alias):
    """Reconstruct the exact categorical encoded by an alias table."""
    k = prob.size
    out = prob.copy()
    np.add.at(out, alias, 1.0 - prob)
    return out / k
