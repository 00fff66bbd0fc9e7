"""Semi-supervised baselines: score a pair, accept above a tuned threshold."""

from dataclasses import dataclass, field

import numpy as np

from cohypo.errors import ContractError


def cosine(u, v):
    """u.v / (|u||v|); rejects zero vectors."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ContractError("cosine is undefined for a zero vector")
    return float(u @ v / (nu * nv))


def lin_similarity(u, v, rankings):
    """Shared feature mass over total feature mass, in [0, 1].

    Scores below zero are clamped to zero before summation so the ratio stays
    within [0, 1].
    """
    fid_u, s_u = rankings.ranking(u)
    fid_v, s_v = rankings.ranking(v)
    s_u = np.maximum(s_u, 0.0)
    s_v = np.maximum(s_v, 0.0)
    mass_u = float(s_u.sum())
    mass_v = float(s_v.sum())
    if mass_u <= 0.0 or mass_v <= 0.0:
        raise ContractError("lin similarity needs positive total score mass for both words")
    score_v = {int(f): s for f, s in zip(fid_v, s_v)}
    shared = 0.0
    for f, s in zip(fid_u, s_u):
        other = score_v.get(int(f))
        if other is not None:
            shared += s + other
    return shared / (mass_u + mass_v)


def fit_threshold(scored):
    """Pick the accuracy-maximizing threshold for the rule `score > p`.

    Candidates are midpoints of consecutive distinct sorted scores; ties pick
    the smallest p. Degenerate input with a single distinct score yields that
    score itself (everything classified negative).
    """
    scores = np.asarray([s for s, _ in scored], dtype=np.float64)
    labels = np.asarray([l for _, l in scored], dtype=np.int64)
    if scores.size == 0 or np.unique(labels).size < 2:
        raise ContractError("threshold fitting needs both labels present")

    order = np.argsort(scores, kind="stable")
    s_sorted = scores[order]
    l_sorted = labels[order]
    uniq = np.unique(s_sorted)
    if uniq.size == 1:
        return float(uniq[0])

    n = scores.size
    total1 = int(l_sorted.sum())
    ones_prefix = np.cumsum(l_sorted)
    best_p, best_correct = None, -1
    for i in range(uniq.size - 1):
        p = (uniq[i] + uniq[i + 1]) / 2.0
        # samples with score <= p are predicted 0
        cut = int(np.searchsorted(s_sorted, p, side="right"))
        zeros_below = cut - int(ones_prefix[cut - 1]) if cut > 0 else 0
        ones_above = total1 - (int(ones_prefix[cut - 1]) if cut > 0 else 0)
        correct = zeros_below + ones_above
        if correct > best_correct:
            best_correct = correct
            best_p = p
    return float(best_p)


@dataclass
class ThresholdModel:
    """Wraps a tuned threshold; classification happens on externally computed scores."""

    kind: str  # "cosinep" or "linp"
    threshold: float
    config: dict = field(default_factory=dict)

    def predict_scores(self, scores):
        return (np.asarray(scores, dtype=np.float64) > self.threshold).astype(np.int64)
