"""Word/context-feature count tables and association scoring.

The count table is the raw material for similarity: it stores aggregated
(word, feature) counts together with their margins and the grand total.
Token ids are assigned by sorted token order after aggregation, so identical
record multisets produce identical tables regardless of input order.
"""

import gzip
from dataclasses import dataclass, field

import numpy as np

from cohypo import binio
from cohypo.errors import ContractError, InputFormatError, MissingInputError, UnknownWordError

_MAGIC = b"CTS1"


def association_score(c_wf, c_w, c_f, n_total):
    """Count-weighted PMI: c_wf * log2(c_wf * N / (c_w * c_f)).

    Negative for pairs co-occurring less often than independence predicts.
    """
    if c_wf <= 0 or c_w <= 0 or c_f <= 0 or n_total <= 0:
        raise ContractError("association_score needs strictly positive counts")
    if c_wf > min(c_w, c_f):
        raise ContractError(
            f"pair count {c_wf} exceeds a margin (word {c_w}, feature {c_f})"
        )
    num = np.float64(c_wf) * np.float64(n_total)
    den = np.float64(c_w) * np.float64(c_f)
    return float(np.float64(c_wf) * np.log2(num / den))


@dataclass
class CountTable:
    """Aggregated (word, feature) counts in CSR layout over sorted vocabularies."""

    words: list
    features: list
    indptr: np.ndarray      # int64, len n_words + 1
    feature_ids: np.ndarray  # int32, ascending within each word's slice
    counts: np.ndarray       # int64
    word_counts: np.ndarray
    feature_counts: np.ndarray
    total: int
    word_index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.word_index:
            self.word_index = {w: i for i, w in enumerate(self.words)}

    @property
    def n_words(self):
        return len(self.words)

    @property
    def n_features(self):
        return len(self.features)

    def word_id(self, word):
        try:
            return self.word_index[word]
        except KeyError:
            raise UnknownWordError(word, "count table") from None

    def word_slice(self, wid):
        """(feature_ids, counts) for one word."""
        lo, hi = self.indptr[wid], self.indptr[wid + 1]
        return self.feature_ids[lo:hi], self.counts[lo:hi]

    def count_of_word(self, word):
        wid = self.word_index.get(word)
        return int(self.word_counts[wid]) if wid is not None else None

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            binio.write_str_table(fh, self.words)
            binio.write_str_table(fh, self.features)
            binio.write_u64(fh, self.total)
            binio.write_array(fh, self.indptr, "<i8")
            binio.write_array(fh, self.feature_ids, "<i4")
            binio.write_array(fh, self.counts, "<i8")
            binio.write_array(fh, self.word_counts, "<i8")
            binio.write_array(fh, self.feature_counts, "<i8")

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            binio.expect_magic(fh, _MAGIC, path=path)
            words = binio.read_str_table(fh)
            features = binio.read_str_table(fh)
            total = binio.read_u64(fh)
            indptr = binio.read_array(fh, "<i8")
            feature_ids = binio.read_array(fh, "<i4")
            counts = binio.read_array(fh, "<i8")
            word_counts = binio.read_array(fh, "<i8")
            feature_counts = binio.read_array(fh, "<i8")
        return cls(words, features, indptr, feature_ids, counts,
                   word_counts, feature_counts, int(total))


def ingest_counts(records):
    """Aggregate (word, feature, count) records into a CountTable.

    Duplicate (word, feature) pairs are summed. Tokens must be non-empty and
    counts positive integers.
    """
    agg = {}
    for word, feature, count in records:
        if not word or not feature:
            raise ContractError("empty token in count record")
        if not isinstance(count, int) or isinstance(count, bool) or count <= 0:
            raise ContractError(f"count must be a positive integer, got {count!r}")
        key = (word, feature)
        agg[key] = agg.get(key, 0) + count
    return _finalize(agg)


def parse_count_lines(lines, path=None, skip_bad_lines=False, bad_lines=None):
    """Yield (word, feature, count) from tab-separated lines.

    Malformed lines raise InputFormatError with their line number, or are
    collected into `bad_lines` when skip_bad_lines is set.
    """
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line:
            continue
        fields = line.split("\t")
        problem = None
        count = 0
        if len(fields) != 3:
            problem = f"expected 3 tab-separated fields, got {len(fields)}"
        else:
            word, feature, count_text = fields
            if not word or not feature:
                problem = "empty token"
            else:
                try:
                    count = int(count_text)
                except ValueError:
                    problem = f"non-integer count {count_text!r}"
                else:
                    if count <= 0:
                        problem = f"non-positive count {count}"
        if problem is not None:
            if skip_bad_lines:
                if bad_lines is not None:
                    bad_lines.append((lineno, problem))
                continue
            raise InputFormatError(problem, path=path, line=lineno)
        yield word, feature, count


def ingest_counts_file(path, skip_bad_lines=False, bad_lines=None):
    """Read a `word TAB feature TAB count` file (gzip-transparent)."""
    try:
        fh = open_maybe_gzip(path)
    except OSError as exc:
        raise MissingInputError(f"cannot open counts file {path}: {exc}") from exc
    with fh:
        return ingest_counts(
            parse_count_lines(fh, path=path, skip_bad_lines=skip_bad_lines,
                              bad_lines=bad_lines)
        )


def open_maybe_gzip(path, mode="rt"):
    with open(path, "rb") as probe:
        magic = probe.read(2)
    if magic == b"\x1f\x8b":
        return gzip.open(path, mode, encoding="utf-8" if "t" in mode else None)
    return open(path, mode, encoding="utf-8" if "t" in mode else None)


def _finalize(agg):
    words = sorted({w for w, _ in agg})
    features = sorted({f for _, f in agg})
    word_index = {w: i for i, w in enumerate(words)}
    feature_index = {f: i for i, f in enumerate(features)}

    nnz = len(agg)
    wid = np.empty(nnz, dtype=np.int64)
    fid = np.empty(nnz, dtype=np.int32)
    cnt = np.empty(nnz, dtype=np.int64)
    for i, ((w, f), c) in enumerate(agg.items()):
        wid[i] = word_index[w]
        fid[i] = feature_index[f]
        cnt[i] = c
    order = np.lexsort((fid, wid))
    wid, fid, cnt = wid[order], fid[order], cnt[order]

    indptr = np.zeros(len(words) + 1, dtype=np.int64)
    np.add.at(indptr, wid + 1, 1)
    indptr = np.cumsum(indptr, dtype=np.int64)

    word_counts = np.zeros(len(words), dtype=np.int64)
    np.add.at(word_counts, wid, cnt)
    feature_counts = np.zeros(len(features), dtype=np.int64)
    np.add.at(feature_counts, fid, cnt)

    return CountTable(
        words=words,
        features=features,
        indptr=indptr,
        feature_ids=fid,
        counts=cnt,
        word_counts=word_counts,
        feature_counts=feature_counts,
        total=int(cnt.sum()),
        word_index=word_index,
    )
