"""Skip-gram with negative sampling over walk corpora.

For each (center, context) pair within the window the step maximizes
log sigma(u_ctx . v_cen) + sum_neg log sigma(-u_neg . v_cen), with negatives
drawn from the unigram^noise_exponent distribution of corpus tokens.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from cohypo import binio, kernels
from cohypo._rng import derive_seed
from cohypo.alias import build_alias
from cohypo.errors import ContractError, InputFormatError, TrainingDivergedError, UnknownWordError

_MAGIC = b"EMB1"


@dataclass(frozen=True)
class SgnsConfig:
    dim: int = 128
    window: int = 10
    negatives: int = 5
    epochs: int = 5
    lr_start: float = 0.025
    lr_end: float = 0.0001
    noise_exponent: float = 0.75
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1 or self.window < 1 or self.negatives < 1 or self.epochs < 1:
            raise ContractError("dim, window, negatives and epochs must all be >= 1")
        if not (self.lr_start > self.lr_end > 0):
            raise ContractError("need lr_start > lr_end > 0")

    def to_dict(self):
        return {
            "dim": self.dim, "window": self.window, "negatives": self.negatives,
            "epochs": self.epochs, "lr_start": self.lr_start, "lr_end": self.lr_end,
            "noise_exponent": self.noise_exponent, "seed": self.seed,
        }


@dataclass
class EmbeddingMatrix:
    """Learned vectors; `input_vectors` are the ones used downstream."""

    words: list
    input_vectors: np.ndarray
    context_vectors: np.ndarray
    config: dict = field(default_factory=dict)
    epoch_losses: list = field(default_factory=list)
    word_index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.word_index:
            self.word_index = {w: i for i, w in enumerate(self.words)}

    @property
    def dim(self):
        return self.input_vectors.shape[1]

    def __contains__(self, word):
        return word in self.word_index

    def vector(self, word):
        try:
            return self.input_vectors[self.word_index[word]]
        except KeyError:
            raise UnknownWordError(word, "embedding vocabulary") from None

    def save_text(self, path):
        """`<vocab> <dim>` header then one `word v1 .. vd` line per word."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{len(self.words)} {self.dim}\n")
            for word, row in zip(self.words, self.input_vectors):
                fh.write(word + " " + " ".join(format(x, ".6f") for x in row) + "\n")

    def save_binary(self, path):
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            binio.write_str_table(fh, self.words)
            binio.write_u32(fh, self.dim)
            binio.write_array(fh, self.input_vectors, "<f8")
            binio.write_array(fh, self.context_vectors, "<f8")
            binio.write_json_blob(fh, {"config": self.config,
                                       "epoch_losses": self.epoch_losses})

    @classmethod
    def load(cls, path):
        """Read either the binary sidecar or the text format."""
        with open(path, "rb") as fh:
            magic = fh.read(4)
        if magic == _MAGIC:
            return cls._load_binary(path)
        return cls._load_text(path)

    @classmethod
    def _load_binary(cls, path):
        with open(path, "rb") as fh:
            binio.expect_magic(fh, _MAGIC, path=path)
            words = binio.read_str_table(fh)
            dim = binio.read_u32(fh)
            inputs = binio.read_array(fh, "<f8").reshape(len(words), dim)
            contexts = binio.read_array(fh, "<f8").reshape(len(words), dim)
            meta = binio.read_json_blob(fh)
        return cls(words, inputs, contexts, meta.get("config", {}),
                   meta.get("epoch_losses", []))

    @classmethod
    def _load_text(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise InputFormatError("expected `<vocab> <dim>` header", path=path, line=1)
            n, dim = int(header[0]), int(header[1])
            words, rows = [], []
            for lineno, line in enumerate(fh, 2):
                parts = line.rstrip("\n").split(" ")
                if len(parts) != dim + 1:
                    raise InputFormatError(f"expected {dim + 1} fields", path=path, line=lineno)
                words.append(parts[0])
                rows.append([float(x) for x in parts[1:]])
        if len(words) != n:
            raise InputFormatError(f"header declared {n} words, found {len(words)}", path=path)
        inputs = np.asarray(rows, dtype=np.float64)
        return cls(words, inputs, np.zeros_like(inputs), {"source": "text"})


def pairs_per_walk(walk_length, window):
    """Exact number of ordered (center, context) pairs in one full walk."""
    total = 0
    for i in range(walk_length):
        total += min(i + window, walk_length - 1) - max(i - window, 0)
    return total


def pair_loss_and_grad(center_vec, ctx_matrix, labels):
    """Loss and analytic gradients for one training step (without lr).

    labels is 1 for the positive row and 0 for negatives. Returns
    (loss, grad_center, grad_ctx_matrix) for gradient checking.
    """
    scores = ctx_matrix @ center_vec
    sig = 1.0 / (1.0 + np.exp(-scores))
    pos = labels > 0.5
    loss = float(np.sum(np.logaddexp(0.0, -scores[pos])) +
                 np.sum(np.logaddexp(0.0, scores[~pos])))
    coef = sig - labels  # d loss / d score
    grad_center = ctx_matrix.T @ coef
    grad_ctx = np.outer(coef, center_vec)
    return loss, grad_center, grad_ctx


def train_sgns(corpus, cfg, threads=1):
    """Train embeddings over a walk corpus; returns an EmbeddingMatrix.

    threads=1 is bit-reproducible for a fixed seed; threads>1 updates shared
    matrices without synchronization (lock-free, nondeterministic), which is
    only worthwhile on the compiled lane.
    """
    if corpus.n_walks == 0:
        raise ContractError("walk corpus is empty")

    walks = corpus.walks
    token_counts = np.bincount(walks.ravel(), minlength=len(corpus.words))
    present = np.nonzero(token_counts > 0)[0]
    remap = np.full(len(corpus.words), -1, dtype=np.int32)
    remap[present] = np.arange(present.size, dtype=np.int32)
    walks = remap[walks].astype(np.int32)
    vocab = [corpus.words[i] for i in present]

    noise = token_counts[present].astype(np.float64) ** cfg.noise_exponent
    noise_prob, noise_alias = build_alias(noise)

    init_rng = np.random.default_rng(derive_seed(cfg.seed, "sgns-init"))
    w_in = (init_rng.random((present.size, cfg.dim)) - 0.5) / cfg.dim
    w_ctx = np.zeros_like(w_in)

    ppw = pairs_per_walk(walks.shape[1], cfg.window)
    losses = []
    if threads <= 1:
        total_pairs = walks.shape[0] * ppw * cfg.epochs
        state = derive_seed(cfg.seed, "sgns-train")
        done = 0
        for epoch in range(cfg.epochs):
            loss_sum, n_pairs, state = kernels.sgns_epoch(
                walks, w_in, w_ctx, cfg.window, cfg.negatives,
                noise_prob, noise_alias, cfg.lr_start, cfg.lr_end,
                total_pairs, done, state)
            done += n_pairs
            _check_finite(loss_sum, w_in, w_ctx, epoch)
            losses.append(loss_sum / max(n_pairs, 1))
    else:
        shards = [np.ascontiguousarray(walks[k::threads]) for k in range(threads)]
        shards = [s for s in shards if s.shape[0]]
        shard_totals = [s.shape[0] * ppw * cfg.epochs for s in shards]
        states = [derive_seed(cfg.seed, "sgns-train", k) for k in range(len(shards))]
        dones = [0] * len(shards)
        for epoch in range(cfg.epochs):
            with ThreadPoolExecutor(max_workers=len(shards)) as pool:
                futures = [
                    pool.submit(kernels.sgns_epoch, shard, w_in, w_ctx,
                                cfg.window, cfg.negatives, noise_prob, noise_alias,
                                cfg.lr_start, cfg.lr_end, shard_totals[k],
                                dones[k], states[k])
                    for k, shard in enumerate(shards)
                ]
                results = [f.result() for f in futures]
            loss_sum = sum(r[0] for r in results)
            n_pairs = sum(r[1] for r in results)
            for k, r in enumerate(results):
                dones[k] += r[1]
                states[k] = r[2]
            _check_finite(loss_sum, w_in, w_ctx, epoch)
            losses.append(loss_sum / max(n_pairs, 1))

    config = cfg.to_dict()
    config.update({"backend": kernels.BACKEND, "threads": threads,
                   "n_walks": int(corpus.n_walks),
                   "walk_length": int(corpus.walks.shape[1])})
    return EmbeddingMatrix(vocab, w_in, w_ctx, config, losses)


def _check_finite(loss_sum, w_in, w_ctx, epoch):
    if not np.isfinite(loss_sum) or not np.isfinite(w_in).all() or not np.isfinite(w_ctx).all():
        raise TrainingDivergedError(
            f"non-finite values after epoch {epoch}; lower the learning rate"
        )
