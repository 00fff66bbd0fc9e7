"""Distributional-thesaurus graph: shared-feature overlap edges in CSR form."""

import zlib
from dataclasses import dataclass, field

import numpy as np

from cohypo import binio
from cohypo.errors import ContractError, InputFormatError, UnknownWordError

_MAGIC = b"DTG1"


@dataclass
class DTGraph:
    """Undirected weighted word graph; adjacency sorted by neighbor id."""

    words: list
    indptr: np.ndarray   # int64, len n_nodes + 1
    indices: np.ndarray  # int32, neighbor ids ascending per node
    weights: np.ndarray  # int32, >= 1
    word_index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.word_index:
            self.word_index = {w: i for i, w in enumerate(self.words)}

    @property
    def n_nodes(self):
        return len(self.words)

    @property
    def n_edges(self):
        return self.indices.size // 2

    def word_id(self, word):
        if isinstance(word, str):
            try:
                return self.word_index[word]
            except KeyError:
                raise UnknownWordError(word, "graph") from None
        wid = int(word)
        if not 0 <= wid < self.n_nodes:
            raise UnknownWordError(word, "graph")
        return wid

    def degree(self, u):
        u = self.word_id(u)
        return int(self.indptr[u + 1] - self.indptr[u])

    def neighbors(self, u):
        """(neighbor_ids, weights) for one node."""
        u = self.word_id(u)
        lo, hi = self.indptr[u], self.indptr[u + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def edge_weight(self, u, v):
        """Weight of edge (u, v), or 0 if absent."""
        u, v = self.word_id(u), self.word_id(v)
        lo, hi = self.indptr[u], self.indptr[u + 1]
        pos = lo + np.searchsorted(self.indices[lo:hi], v)
        if pos < hi and self.indices[pos] == v:
            return int(self.weights[pos])
        return 0

    def non_isolated(self):
        deg = np.diff(self.indptr)
        return np.nonzero(deg > 0)[0].astype(np.int32)

    def signature(self):
        """Cheap structural checksum used to pair graphs with transition tables."""
        crc = zlib.crc32(self.indptr.astype("<i8").tobytes())
        crc = zlib.crc32(self.indices.astype("<i4").tobytes(), crc)
        crc = zlib.crc32(self.weights.astype("<i4").tobytes(), crc)
        return (self.n_nodes, self.indices.size, crc)

    @classmethod
    def from_edge_list(cls, words, edges):
        """Build from (u, v, weight) triples; ids or word strings accepted."""
        index = {w: i for i, w in enumerate(words)}
        n = len(words)
        us, vs, ws = [], [], []
        for u, v, w in edges:
            ui = index[u] if isinstance(u, str) else int(u)
            vi = index[v] if isinstance(v, str) else int(v)
            if ui == vi:
                raise ContractError("self-loops are not allowed")
            if int(w) < 1:
                raise ContractError("edge weights must be >= 1")
            us.extend((ui, vi))
            vs.extend((vi, ui))
            ws.extend((int(w), int(w)))
        return cls(list(words), *_csr_from_directed(n, np.array(us, dtype=np.int64),
                                                    np.array(vs, dtype=np.int64),
                                                    np.array(ws, dtype=np.int64)),
                   word_index=index)

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            binio.write_u32(fh, self.n_nodes)
            binio.write_str_table(fh, self.words)
            binio.write_array(fh, self.indptr, "<i8")
            binio.write_array(fh, self.indices, "<u4")
            binio.write_array(fh, self.weights, "<u4")

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            binio.expect_magic(fh, _MAGIC, path=path)
            n = binio.read_u32(fh)
            words = binio.read_str_table(fh)
            if len(words) != n:
                raise InputFormatError("node count does not match string table", path=path)
            indptr = binio.read_array(fh, "<i8")
            indices = binio.read_array(fh, "<u4").astype(np.int32)
            weights = binio.read_array(fh, "<u4").astype(np.int32)
        return cls(words, indptr, indices, weights)

    def write_edges_tsv(self, path):
        """Human-readable `word1 TAB word2 TAB weight`, one line per edge (u < v)."""
        with open(path, "w", encoding="utf-8") as fh:
            for u in range(self.n_nodes):
                lo, hi = self.indptr[u], self.indptr[u + 1]
                for pos in range(lo, hi):
                    v = int(self.indices[pos])
                    if u < v:
                        fh.write(f"{self.words[u]}\t{self.words[v]}\t{int(self.weights[pos])}\n")


def build_dt_graph(rankings, n_neighbors=200):
    """Connect each word to its top-n neighbors by top-k feature overlap.

    Candidates come from an inverted feature->words index, so only words
    sharing at least one ranked feature are compared. Each word keeps its
    n_neighbors best candidates (ties toward the lower word id); the final
    graph is the union of the per-word survivals, each edge carrying the
    exact overlap count.
    """
    if n_neighbors < 1:
        raise ContractError("n_neighbors must be >= 1")

    n = rankings.n_words
    deg = np.diff(rankings.indptr)
    wid_arr = np.repeat(np.arange(n, dtype=np.int64), deg)
    fid_arr = rankings.feature_ids

    order = np.lexsort((wid_arr, fid_arr))
    f_sorted = fid_arr[order]
    w_sorted = wid_arr[order].astype(np.int64)
    # slice boundaries of each feature's posting list
    uniq_f, f_start = np.unique(f_sorted, return_index=True)
    f_end = np.append(f_start[1:], f_sorted.size)
    post_lo = {int(f): (int(s), int(e)) for f, s, e in zip(uniq_f, f_start, f_end)}

    src, dst, wgt = [], [], []
    for u in range(n):
        fids = rankings.feature_set(u)
        if fids.size == 0:
            continue
        chunks = [w_sorted[s:e] for s, e in (post_lo[int(f)] for f in fids)]
        cand = np.concatenate(chunks)
        ids, overlap = np.unique(cand, return_counts=True)
        keep = ids != u
        ids, overlap = ids[keep], overlap[keep]
        if ids.size == 0:
            continue
        top = np.lexsort((ids, -overlap))[:n_neighbors]
        src.append(np.full(top.size, u, dtype=np.int64))
        dst.append(ids[top])
        wgt.append(overlap[top])

    if not src:
        empty = np.zeros(0, dtype=np.int32)
        return DTGraph(list(rankings.words), np.zeros(n + 1, dtype=np.int64), empty,
                       empty.copy(), word_index=dict(rankings.word_index))

    src = np.concatenate(src)
    dst = np.concatenate(dst)
    wgt = np.concatenate(wgt)

    # union symmetrization: dedupe unordered pairs, then emit both directions
    a = np.minimum(src, dst)
    b = np.maximum(src, dst)
    pair_key = a * np.int64(n) + b
    _, uniq_idx = np.unique(pair_key, return_index=True)
    a, b, w = a[uniq_idx], b[uniq_idx], wgt[uniq_idx]

    heads = np.concatenate([a, b])
    tails = np.concatenate([b, a])
    ww = np.concatenate([w, w])
    indptr, indices, weights = _csr_from_directed(n, heads, tails, ww)
    return DTGraph(list(rankings.words), indptr, indices, weights,
                   word_index=dict(rankings.word_index))


def _csr_from_directed(n, heads, tails, weights):
    order = np.lexsort((tails, heads))
    heads, tails, weights = heads[order], tails[order], weights[order]
    if heads.size and np.any((heads[1:] == heads[:-1]) & (tails[1:] == tails[:-1])):
        raise ContractError("duplicate edge in input")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, heads + 1, 1)
    indptr = np.cumsum(indptr, dtype=np.int64)
    return indptr, tails.astype(np.int32), weights.astype(np.int32)
