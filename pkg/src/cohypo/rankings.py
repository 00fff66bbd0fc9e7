"""Per-word top-k context-feature rankings by association score."""

from dataclasses import dataclass, field

import numpy as np

from cohypo.errors import ContractError, UnknownWordError

_F64 = np.float64


@dataclass
class ContextFeatureTable:
    """Top-k features per word, ranked by score desc with feature-id tie-break.

    `feature_ids`/`scores` hold the rank order; `sorted_feature_ids` holds the
    same id sets in ascending order for fast intersection.
    """

    words: list
    features: list
    indptr: np.ndarray
    feature_ids: np.ndarray
    scores: np.ndarray
    sorted_feature_ids: np.ndarray
    k_features: int
    word_index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.word_index:
            self.word_index = {w: i for i, w in enumerate(self.words)}

    @property
    def n_words(self):
        return len(self.words)

    def word_id(self, word):
        if isinstance(word, str):
            try:
                return self.word_index[word]
            except KeyError:
                raise UnknownWordError(word, "feature rankings") from None
        wid = int(word)
        if not 0 <= wid < self.n_words:
            raise UnknownWordError(word, "feature rankings")
        return wid

    def ranking(self, word):
        """(feature_ids, scores) in rank order for one word."""
        wid = self.word_id(word)
        lo, hi = self.indptr[wid], self.indptr[wid + 1]
        return self.feature_ids[lo:hi], self.scores[lo:hi]

    def feature_set(self, word):
        """Ascending feature-id array for one word's top-k list."""
        wid = self.word_id(word)
        lo, hi = self.indptr[wid], self.indptr[wid + 1]
        return self.sorted_feature_ids[lo:hi]


def build_feature_rankings(table, k_features=1000):
    """Rank each word's features by association score, keep the top k.

    Ties break toward the lower feature id; words with fewer than k features
    keep all of them. Negative scores rank below positive ones but are not
    dropped.
    """
    if k_features < 1:
        raise ContractError("k_features must be >= 1")

    n_words = table.n_words
    deg = np.diff(table.indptr)
    wid_arr = np.repeat(np.arange(n_words, dtype=np.int64), deg)
    fid_arr = table.feature_ids
    cnt = table.counts.astype(_F64)

    # same operation order as association_score, so the two paths agree bitwise
    num = cnt * _F64(table.total)
    den = table.word_counts[wid_arr].astype(_F64) * table.feature_counts[fid_arr].astype(_F64)
    scores = cnt * np.log2(num / den)

    order = np.lexsort((fid_arr, -scores, wid_arr))
    fid_sorted = fid_arr[order]
    score_sorted = scores[order]

    take = np.minimum(deg, k_features)
    indptr = np.zeros(n_words + 1, dtype=np.int64)
    np.cumsum(take, out=indptr[1:])
    base = np.repeat(table.indptr[:-1], take)
    offset = np.arange(indptr[-1], dtype=np.int64) - np.repeat(indptr[:-1], take)
    sel = base + offset

    kept_fids = fid_sorted[sel]
    kept_scores = score_sorted[sel]

    # ascending-id copy per word for set intersections
    flat_word = np.repeat(np.arange(n_words, dtype=np.int64), take)
    set_order = np.lexsort((kept_fids, flat_word))
    sorted_fids = kept_fids[set_order]

    return ContextFeatureTable(
        words=table.words,
        features=table.features,
        indptr=indptr,
        feature_ids=kept_fids,
        scores=kept_scores,
        sorted_feature_ids=sorted_fids,
        k_features=k_features,
        word_index=dict(table.word_index),
    )


def overlap_similarity(u, v, rankings):
    """Number of top-k features shared by two words (symmetric, >= 0)."""
    fu = rankings.feature_set(u)
    fv = rankings.feature_set(v)
    return int(np.intersect1d(fu, fv, assume_unique=True).size)
