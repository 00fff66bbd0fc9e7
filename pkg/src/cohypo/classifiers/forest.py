"""Random forest of CART trees with Gini splits on bootstrap samples."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from cohypo._rng import derive_seed
from cohypo.errors import ContractError


@dataclass(frozen=True)
class RandomForestConfig:
    n_trees: int = 100
    max_depth: int | None = None  # None = unlimited
    mtry: int | None = None       # None = floor(sqrt(d))
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.n_trees < 1:
            raise ContractError("n_trees must be >= 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ContractError("max_depth must be >= 0")


@dataclass
class DecisionTree:
    """Flattened binary tree; children index -1 marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    label: np.ndarray

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(X.shape[0], dtype=np.int64)
        stack = [(0, np.arange(X.shape[0]))]
        while stack:
            nid, idx = stack.pop()
            if self.left[nid] < 0:
                out[idx] = self.label[nid]
                continue
            mask = X[idx, self.feature[nid]] <= self.threshold[nid]
            if mask.any():
                stack.append((int(self.left[nid]), idx[mask]))
            if not mask.all():
                stack.append((int(self.right[nid]), idx[~mask]))
        return out


@dataclass
class RandomForestModel:
    trees: list
    bootstrap_indices: list
    oob_indices: list
    config: dict = field(default_factory=dict)

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        votes = np.zeros(X.shape[0], dtype=np.int64)
        for tree in self.trees:
            votes += tree.predict(X)
        # strict majority for the positive class; ties resolve to 0
        return (2 * votes > len(self.trees)).astype(np.int64)


def train_random_forest(X, y, cfg=RandomForestConfig()):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n, d = X.shape
    if n < 2:
        raise ContractError("need at least 2 training rows")
    mtry = cfg.mtry if cfg.mtry is not None else max(1, int(np.sqrt(d)))
    mtry = min(mtry, d)

    def build(k):
        rng = np.random.default_rng(derive_seed(cfg.seed, "tree", k))
        boot = rng.integers(0, n, size=n)
        oob = np.setdiff1d(np.arange(n), np.unique(boot))
        tree = _grow_tree(X, y, boot, rng, cfg.max_depth, mtry)
        return tree, boot, oob

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(build, range(cfg.n_trees)))
    else:
        results = [build(k) for k in range(cfg.n_trees)]

    trees = [r[0] for r in results]
    boots = [r[1] for r in results]
    oobs = [r[2] for r in results]
    return RandomForestModel(trees, boots, oobs,
                             {"n_trees": cfg.n_trees, "max_depth": cfg.max_depth,
                              "mtry": mtry, "seed": cfg.seed})


def _grow_tree(X, y, sample_idx, rng, max_depth, mtry):
    """Preorder (left-first) iterative CART growth; rng draws follow node order."""
    d = X.shape[1]
    feature, threshold, left, right, label = [], [], [], [], []

    # stack of (sample indices, depth, parent id, is_left_child)
    stack = [(np.asarray(sample_idx, dtype=np.int64), 0, -1, False)]
    while stack:
        idx, depth, parent, is_left = stack.pop()
        nid = len(feature)
        if parent >= 0:
            if is_left:
                left[parent] = nid
            else:
                right[parent] = nid
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        ys = y[idx]
        ones = int(ys.sum())
        label.append(1 if 2 * ones > ys.size else 0)

        if idx.size < 2 or (max_depth is not None and depth >= max_depth):
            continue
        if ones == 0 or ones == ys.size:
            continue

        feats = np.sort(rng.choice(d, size=mtry, replace=False))
        split = best_gini_split(X[np.ix_(idx, feats)], ys)
        if split is None:
            continue
        col, thr = split
        feature[nid] = int(feats[col])
        threshold[nid] = thr
        mask = X[idx, feats[col]] <= thr
        stack.append((idx[~mask], depth + 1, nid, False))
        stack.append((idx[mask], depth + 1, nid, True))

    return DecisionTree(np.array(feature, dtype=np.int32),
                        np.array(threshold, dtype=np.float64),
                        np.array(left, dtype=np.int32),
                        np.array(right, dtype=np.int32),
                        np.array(label, dtype=np.int32))


def best_gini_split(Xs, ys):
    """Best (column, threshold) by Gini impurity decrease, or None.

    Candidates are midpoints between consecutive distinct sorted values.
    Ties break toward the lower column index, then the lower threshold.
    """
    n, m = Xs.shape
    order = np.argsort(Xs, axis=0, kind="stable")
    xs = np.take_along_axis(Xs, order, axis=0)
    ones_prefix = np.cumsum(ys[order], axis=0, dtype=np.float64)

    total1 = float(ys.sum())
    nl = np.arange(1, n, dtype=np.float64)[:, None]
    nr = n - nl
    left1 = ones_prefix[:-1]
    right1 = total1 - left1
    # weighted child impurity; the parent term is constant so minimizing suffices
    gl = 1.0 - (left1 / nl) ** 2 - ((nl - left1) / nl) ** 2
    gr = 1.0 - (right1 / nr) ** 2 - ((nr - right1) / nr) ** 2
    weighted = (nl * gl + nr * gr) / n

    valid = xs[1:] > xs[:-1]
    if not valid.any():
        return None
    weighted[~valid] = np.inf
    flat = np.argmin(weighted.T)  # feature-major scan fixes the tie order
    col, pos = divmod(int(flat), n - 1)
    lo, hi = xs[pos, col], xs[pos + 1, col]
    thr = (lo + hi) / 2.0
    if thr == hi:  # midpoint rounded up: fall back so `<=` keeps both sides non-empty
        thr = lo
    return col, float(thr)
