"""Composition operators turning a word-vector pair into one feature vector."""

import enum
from dataclasses import dataclass, field

import numpy as np

from cohypo.errors import ContractError


class CompositionOp(enum.Enum):
    DIFF = "diff"  # first minus second
    CC = "cc"      # concatenation, output dimension doubles
    ADD = "add"
    MUL = "mul"
    SING = "sing"  # vector of the second word alone

    @classmethod
    def parse(cls, name):
        try:
            return cls(name.lower())
        except ValueError:
            options = ", ".join(op.value for op in cls)
            raise ContractError(f"unknown composition op {name!r} (one of: {options})") from None

    def output_dim(self, dim):
        return 2 * dim if self is CompositionOp.CC else dim


def compose(vec1, vec2, op):
    """Apply one composition operator to a pair of equal-length vectors."""
    vec1 = np.asarray(vec1, dtype=np.float64)
    vec2 = np.asarray(vec2, dtype=np.float64)
    if vec1.shape != vec2.shape or vec1.ndim != 1:
        raise ContractError(f"dimension mismatch: {vec1.shape} vs {vec2.shape}")
    if op is CompositionOp.DIFF:
        return vec1 - vec2
    if op is CompositionOp.CC:
        return np.concatenate([vec1, vec2])
    if op is CompositionOp.ADD:
        return vec1 + vec2
    if op is CompositionOp.MUL:
        return vec1 * vec2
    if op is CompositionOp.SING:
        return vec2.copy()
    raise ContractError(f"unknown composition op {op!r}")


@dataclass
class OovReport:
    """Pairs excluded because a word is missing from the vocabulary."""

    excluded: list = field(default_factory=list)  # (word1, word2, missing-words)

    @property
    def n_excluded(self):
        return len(self.excluded)

    def to_dict(self):
        return {
            "n_excluded": self.n_excluded,
            "pairs": [{"word1": w1, "word2": w2, "missing": miss}
                      for w1, w2, miss in self.excluded],
        }


def featurize_dataset(records, emb, op, l2_normalize=False):
    """Compose features for every pair with both words in vocabulary.

    Returns (matrix, labels, kept_indices, oov_report); OOV pairs are counted,
    never silently dropped.
    """
    feats, labels, kept = [], [], []
    report = OovReport()
    for idx, rec in enumerate(records):
        missing = [w for w in (rec.word1, rec.word2) if w not in emb]
        if missing:
            report.excluded.append((rec.word1, rec.word2, missing))
            continue
        v1 = emb.vector(rec.word1)
        v2 = emb.vector(rec.word2)
        if l2_normalize:
            v1 = _unit(v1)
            v2 = _unit(v2)
        feats.append(compose(v1, v2, op))
        labels.append(rec.label)
        kept.append(idx)
    dim = op.output_dim(emb.dim)
    matrix = np.asarray(feats, dtype=np.float64) if feats else np.zeros((0, dim))
    return matrix, np.asarray(labels, dtype=np.int64), np.asarray(kept, dtype=np.int64), report


def _unit(v):
    norm = np.linalg.norm(v)
    return v / norm if norm > 0 else v
