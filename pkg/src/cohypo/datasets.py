"""Labeled word-pair datasets for the relation-classification benchmarks.

Canonical file format: `word1 TAB word2 TAB relation` with relations in
{cohyp, hyper, mero, random}. The binary label is cohyp-vs-everything-else.
Adapters for the benchmarks' native layouts: `relation_map` renames foreign
tags (e.g. coord -> cohyp) and `strip_pos_suffix` removes a trailing `-pos`
marker from tokens (e.g. `owl-n` -> `owl`).
"""

import os
from dataclasses import dataclass, field

import numpy as np

from cohypo.counts import open_maybe_gzip
from cohypo.errors import InputFormatError, MissingInputError

RELATIONS = ("cohyp", "hyper", "mero", "random")


@dataclass(frozen=True)
class PairRecord:
    word1: str
    word2: str
    label: int       # 1 iff relation == cohyp
    relation: str
    source: str = ""


@dataclass
class LabeledPairDataset:
    records: list
    source: str = ""

    def __len__(self):
        return len(self.records)

    def labels(self):
        return np.array([r.label for r in self.records], dtype=np.int64)

    def relations(self):
        return [r.relation for r in self.records]

    def filter_relations(self, keep):
        """New dataset with only the given relation tags."""
        kept = [r for r in self.records if r.relation in keep]
        return LabeledPairDataset(kept, self.source)

    def unordered_pairs(self):
        """Set of frozenset word pairs, relation tags ignored."""
        return {frozenset((r.word1, r.word2)) for r in self.records}


def load_pairs(path, source=None, relation_map=None, strip_pos_suffix=False):
    """Parse a pair file; duplicates and unknown relation tags are errors."""
    if not os.path.exists(path):
        raise MissingInputError(f"pairs file not found: {path}")
    source = source if source is not None else os.path.basename(path)
    seen = {}
    records = []
    with open_maybe_gzip(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise InputFormatError(
                    f"expected 3 tab-separated fields, got {len(fields)}",
                    path=path, line=lineno)
            word1, word2, relation = fields
            if strip_pos_suffix:
                word1 = _strip_pos(word1)
                word2 = _strip_pos(word2)
            if relation_map:
                relation = relation_map.get(relation, relation)
            if relation not in RELATIONS:
                raise InputFormatError(
                    f"unknown relation tag {relation!r} (allowed: {', '.join(RELATIONS)})",
                    path=path, line=lineno)
            if not word1 or not word2:
                raise InputFormatError("empty word token", path=path, line=lineno)
            key = (word1, word2, relation)
            if key in seen:
                raise InputFormatError(
                    f"duplicate record {key!r}, first seen on line {seen[key]}",
                    path=path, line=lineno)
            seen[key] = lineno
            records.append(PairRecord(word1, word2, int(relation == "cohyp"),
                                      relation, source))
    return LabeledPairDataset(records, source)


def parse_relation_map(text):
    """Parse `foreign=canonical` comma-separated adapter spec."""
    mapping = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise InputFormatError(f"bad relation-map entry {item!r}, expected foreign=canonical")
        foreign, canonical = item.split("=", 1)
        if canonical not in RELATIONS:
            raise InputFormatError(
                f"relation-map target {canonical!r} not in {', '.join(RELATIONS)}")
        mapping[foreign.strip()] = canonical.strip()
    return mapping


def dataset_overlap(a, b):
    """Percentage of a's pairs found in b and vice versa (unordered matching)."""
    pairs_a = a.unordered_pairs()
    pairs_b = b.unordered_pairs()
    shared = len(pairs_a & pairs_b)
    pct_a = 100.0 * shared / len(pairs_a) if pairs_a else 0.0
    pct_b = 100.0 * shared / len(pairs_b) if pairs_b else 0.0
    return pct_a, pct_b


def _strip_pos(token):
    if len(token) > 2 and token[-2] == "-":
        return token[:-2]
    return token
