"""Second-order biased random walks over the DT graph.

Transition probabilities follow the return/in-out bias scheme: stepping from
t through v, a neighbor x of v gets unnormalized weight w(v,x)/p when x == t,
w(v,x) when x is adjacent to t, and w(v,x)/q otherwise. Distributions are
precomputed as alias tables for O(1) sampling.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from cohypo import kernels
from cohypo._rng import derive_seed
from cohypo.alias import build_alias
from cohypo.errors import ContractError


@dataclass(frozen=True)
class WalkConfig:
    walk_length: int = 80
    walks_per_node: int = 10
    p: float = 1.0
    q: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.walk_length < 2:
            raise ContractError("walk_length must be >= 2")
        if self.walks_per_node < 1:
            raise ContractError("walks_per_node must be >= 1")
        for name in ("p", "q"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ContractError(f"{name} must be finite and positive")


@dataclass
class TransitionTable:
    """Alias tables: one per node (first step) and one per directed edge."""

    node_prob: np.ndarray
    node_alias: np.ndarray
    edge_offsets: np.ndarray
    edge_prob: np.ndarray
    edge_alias: np.ndarray
    p: float
    q: float
    graph_signature: tuple

    def node_table(self, graph, u):
        lo, hi = graph.indptr[u], graph.indptr[u + 1]
        return self.node_prob[lo:hi], self.node_alias[lo:hi]

    def edge_table(self, graph, slot):
        head = graph.indices[slot]
        off = self.edge_offsets[slot]
        deg = graph.indptr[head + 1] - graph.indptr[head]
        return self.edge_prob[off:off + deg], self.edge_alias[off:off + deg]

    def edge_slot(self, graph, t, v):
        """CSR slot of the directed edge t -> v."""
        lo, hi = graph.indptr[t], graph.indptr[t + 1]
        pos = lo + np.searchsorted(graph.indices[lo:hi], v)
        if pos >= hi or graph.indices[pos] != v:
            raise ContractError(f"no edge {t} -> {v}")
        return int(pos)


@dataclass
class WalkCorpus:
    walks: np.ndarray          # int32, shape (n_walks, walk_length), graph node ids
    words: list                # node id -> token, copied from the graph
    config: WalkConfig
    isolated_nodes: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int32))

    @property
    def n_walks(self):
        return self.walks.shape[0]


def precompute_transitions(graph, p=1.0, q=1.0):
    """Build first-step and second-order alias tables for every node/edge."""
    if not (np.isfinite(p) and p > 0 and np.isfinite(q) and q > 0):
        raise ContractError("p and q must be finite and positive")
    if graph.indices.size == 0:
        raise ContractError("graph has no edges")

    indptr, indices = graph.indptr, graph.indices
    weights = graph.weights.astype(np.float64)
    nnz = indices.size

    node_prob = np.empty(nnz, dtype=np.float64)
    node_alias = np.empty(nnz, dtype=np.int32)
    for u in range(graph.n_nodes):
        lo, hi = indptr[u], indptr[u + 1]
        if lo == hi:
            continue
        prob, alias = build_alias(weights[lo:hi])
        node_prob[lo:hi] = prob
        node_alias[lo:hi] = alias

    head_deg = np.diff(indptr)[indices]
    edge_offsets = np.zeros(nnz + 1, dtype=np.int64)
    np.cumsum(head_deg, out=edge_offsets[1:])
    edge_prob = np.empty(edge_offsets[-1], dtype=np.float64)
    edge_alias = np.empty(edge_offsets[-1], dtype=np.int32)

    tails = np.repeat(np.arange(graph.n_nodes, dtype=np.int64), np.diff(indptr))
    for slot in range(nnz):
        t = tails[slot]
        v = indices[slot]
        vlo, vhi = indptr[v], indptr[v + 1]
        nbrs = indices[vlo:vhi]
        biased = weights[vlo:vhi] / q
        shared = np.isin(nbrs, indices[indptr[t]:indptr[t + 1]], assume_unique=True)
        biased[shared] = weights[vlo:vhi][shared]
        back = np.searchsorted(nbrs, t)
        if back < nbrs.size and nbrs[back] == t:
            biased[back] = weights[vlo + back] / p
        prob, alias = build_alias(biased)
        off = edge_offsets[slot]
        edge_prob[off:off + nbrs.size] = prob
        edge_alias[off:off + nbrs.size] = alias

    return TransitionTable(node_prob, node_alias, edge_offsets[:-1],
                           edge_prob, edge_alias, float(p), float(q),
                           graph.signature())


def generate_walks(graph, table, cfg, threads=1):
    """Start walks_per_node walks at every non-isolated node.

    Node order is reshuffled per round from the seed; every walk has its own
    derived RNG stream, so the corpus is identical for any thread count.
    """
    if table.graph_signature != graph.signature():
        raise ContractError("transition table was built for a different graph")

    non_isolated = graph.non_isolated()
    all_nodes = np.arange(graph.n_nodes, dtype=np.int32)
    isolated = np.setdiff1d(all_nodes, non_isolated)

    starts = []
    seeds = []
    for rnd in range(cfg.walks_per_node):
        order_rng = np.random.default_rng(derive_seed(cfg.seed, "walk-order", rnd))
        perm = order_rng.permutation(non_isolated)
        starts.append(perm.astype(np.int32))
        seeds.append(np.array([derive_seed(cfg.seed, "walk", rnd, int(node))
                               for node in perm], dtype=np.uint64))
    starts = np.concatenate(starts) if starts else np.zeros(0, np.int32)
    seeds = np.concatenate(seeds) if seeds else np.zeros(0, np.uint64)

    out = np.empty((starts.size, cfg.walk_length), dtype=np.int32)
    if starts.size:
        args = (graph.indptr, graph.indices, table.node_prob, table.node_alias,
                table.edge_offsets, table.edge_prob, table.edge_alias)
        if threads <= 1:
            kernels.generate_walks_block(*args, starts, seeds, cfg.walk_length, out, 0)
        else:
            bounds = np.linspace(0, starts.size, threads + 1, dtype=np.int64)
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [
                    pool.submit(kernels.generate_walks_block, *args,
                                starts[lo:hi], seeds[lo:hi], cfg.walk_length, out, int(lo))
                    for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo
                ]
                for fut in futures:
                    fut.result()

    return WalkCorpus(out, list(graph.words), cfg, isolated.astype(np.int32))
