"""Synthetic benchmark generator: a planted taxonomy of co-hyponym classes.

Words belong to latent classes; class members draw a fixed share of their
count mass from class-wide features, so they become distributionally similar.
Classes are paired into "sibling" groups that share part of their feature
block, which makes cross-sibling pairs confusable: similar enough to fool a
plain similarity threshold, but still separable from true co-hyponyms.
"""

import gzip
import json
import os
from dataclasses import dataclass

import numpy as np

from cohypo._rng import derive_seed
from cohypo.errors import ContractError


@dataclass(frozen=True)
class SynthConfig:
    n_words: int = 500
    n_classes: int = 20
    seed: int = 0
    class_mass: float = 0.8        # share of each word's counts on class features
    own_features: int = 25         # features private to the class
    shared_features: int = 15      # features shared with the sibling class
    noise_pool: int = 600
    noise_per_word: int = 20
    min_tokens: int = 1000
    max_tokens: int = 20000
    pairs_per_split: int = 1000

    def __post_init__(self):
        if self.n_classes < 2 or self.n_classes % 2:
            raise ContractError("n_classes must be an even number >= 2")
        if self.n_words < self.n_classes:
            raise ContractError("need at least one word per class")
        if not 0 < self.class_mass < 1:
            raise ContractError("class_mass must be in (0, 1)")


def generate(cfg, out_dir):
    """Write counts.tsv.gz, pair datasets, a sample word list and metadata.

    Returns a dict of the created paths.
    """
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng(derive_seed(cfg.seed, "synth"))

    members = _assign_classes(cfg)
    words = [w for cls in members for w in cls]

    counts_path = os.path.join(out_dir, "counts.tsv.gz")
    with gzip.open(counts_path, "wt", encoding="utf-8") as fh:
        for cls_id, cls_words in enumerate(members):
            feats = _class_features(cfg, cls_id)
            for word in cls_words:
                for feature, count in _word_counts(cfg, rng, feats):
                    fh.write(f"{word}\t{feature}\t{count}\n")

    pairs_random = _sample_pairs(cfg, rng, members, mode="random")
    pairs_confusable = _sample_pairs(cfg, rng, members, mode="confusable")
    random_path = os.path.join(out_dir, "pairs_random.tsv")
    confusable_path = os.path.join(out_dir, "pairs_confusable.tsv")
    _write_pairs(pairs_random, random_path)
    _write_pairs(pairs_confusable, confusable_path)

    words_path = os.path.join(out_dir, "words_sample.txt")
    with open(words_path, "w", encoding="utf-8") as fh:
        for cls_id in range(min(4, cfg.n_classes)):
            for word in members[cls_id][:5]:
                fh.write(word + "\n")

    meta_path = os.path.join(out_dir, "synth_meta.json")
    with open(meta_path, "w", encoding="utf-8") as fh:
        json.dump({
            "config": vars(cfg) | {"n_words_effective": len(words)},
            "classes": {f"class_{i:02d}": cls for i, cls in enumerate(members)},
        }, fh, indent=2, sort_keys=True)
        fh.write("\n")

    return {"counts": counts_path, "pairs_random": random_path,
            "pairs_confusable": confusable_path, "words": words_path,
            "meta": meta_path}


def _assign_classes(cfg):
    base = cfg.n_words // cfg.n_classes
    extra = cfg.n_words % cfg.n_classes
    members = []
    idx = 0
    for cls in range(cfg.n_classes):
        size = base + (1 if cls < extra else 0)
        members.append([f"w{idx + i:04d}c{cls:02d}" for i in range(size)])
        idx += size
    return members


def _class_features(cfg, cls_id):
    sibling_group = cls_id // 2
    own = [f"cf{cls_id:02d}_{j:02d}" for j in range(cfg.own_features)]
    shared = [f"sf{sibling_group:02d}_{j:02d}" for j in range(cfg.shared_features)]
    return own + shared


def _word_counts(cfg, rng, class_feats):
    total = int(round(np.exp(rng.uniform(np.log(cfg.min_tokens), np.log(cfg.max_tokens)))))
    class_total = cfg.class_mass * total
    noise_total = total - class_total

    class_weights = rng.dirichlet(np.full(len(class_feats), 2.0))
    noise_ids = rng.choice(cfg.noise_pool, size=cfg.noise_per_word, replace=False)
    noise_weights = rng.dirichlet(np.full(cfg.noise_per_word, 1.0))

    out = []
    for feature, weight in zip(class_feats, class_weights):
        count = int(round(weight * class_total))
        if count > 0:
            out.append((feature, count))
    for fid, weight in zip(noise_ids, noise_weights):
        count = int(round(weight * noise_total))
        if count > 0:
            out.append((f"nf{fid:04d}", count))
    return out


def _sample_pairs(cfg, rng, members, mode):
    """cohyp pairs plus one contrast class: random or confusable (sibling)."""
    n_classes = cfg.n_classes
    pairs = []
    seen = set()

    # co-hyponym pairs: within-class, spread evenly over classes
    per_class = -(-cfg.pairs_per_split // n_classes)
    for cls_words in members:
        added = 0
        while added < per_class and len(pairs) < cfg.pairs_per_split:
            i, j = rng.choice(len(cls_words), size=2, replace=False)
            key = frozenset((cls_words[i], cls_words[j]))
            if len(key) < 2 or key in seen:
                continue
            seen.add(key)
            pairs.append((cls_words[min(i, j)], cls_words[max(i, j)], "cohyp"))
            added += 1
    cohyp = pairs[:cfg.pairs_per_split]

    contrast = []
    attempts = 0
    while len(contrast) < cfg.pairs_per_split and attempts < cfg.pairs_per_split * 100:
        attempts += 1
        if mode == "confusable":
            group = int(rng.integers(0, n_classes // 2))
            c1, c2 = 2 * group, 2 * group + 1
            tag = "hyper"
        else:
            c1, c2 = rng.choice(n_classes, size=2, replace=False)
            if c1 // 2 == c2 // 2:
                continue  # siblings are reserved for the confusable split
            tag = "random"
        w1 = members[c1][int(rng.integers(0, len(members[c1])))]
        w2 = members[c2][int(rng.integers(0, len(members[c2])))]
        key = frozenset((w1, w2))
        if key in seen:
            continue
        seen.add(key)
        contrast.append((min(w1, w2), max(w1, w2), tag))

    return cohyp + contrast


def _write_pairs(pairs, path):
    with open(path, "w", encoding="utf-8") as fh:
        for w1, w2, tag in pairs:
            fh.write(f"{w1}\t{w2}\t{tag}\n")
