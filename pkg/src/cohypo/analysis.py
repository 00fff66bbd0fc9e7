"""Post-hoc error analysis: frequency skew and neighborhood leakage flags."""

import json
from dataclasses import dataclass


@dataclass
class ErrorFlag:
    word1: str
    word2: str
    relation: str
    error_type: str            # "FP" or "FN"
    freq1: int | None
    freq2: int | None
    freq_ratio: float | None   # max/min corpus frequency, None when unavailable
    freq_flagged: bool
    leakage_count: int | None  # co-hyponyms of the partner among own graph neighbors

    def to_dict(self):
        return vars(self)


def build_cohyp_index(predictions):
    """word -> set of gold co-hyponym partners, from prediction records."""
    index = {}
    for rec in predictions:
        if rec["gold"] == 1:
            index.setdefault(rec["word1"], set()).add(rec["word2"])
            index.setdefault(rec["word2"], set()).add(rec["word1"])
    return index


def error_analysis(predictions, counts=None, graph=None, ratio_threshold=10.0):
    """Flag every misclassified pair in a report's prediction list.

    Frequency ratios come from the corpus count table (None when a word has
    no counts); leakage counts how many of each word's graph neighbors are
    gold co-hyponyms of its partner (None when a word is not in the graph).
    """
    cohyp_index = build_cohyp_index(predictions)
    flags = []
    for rec in predictions:
        if rec["pred"] == rec["gold"]:
            continue
        error_type = "FP" if rec["pred"] == 1 else "FN"
        w1, w2 = rec["word1"], rec["word2"]

        freq1 = counts.count_of_word(w1) if counts is not None else None
        freq2 = counts.count_of_word(w2) if counts is not None else None
        if freq1 and freq2:
            ratio = max(freq1, freq2) / min(freq1, freq2)
        else:
            ratio = None

        leakage = None
        if graph is not None and w1 in graph.word_index and w2 in graph.word_index:
            leakage = (_partner_cohyps_in_neighborhood(graph, w1, cohyp_index.get(w2, set()))
                       + _partner_cohyps_in_neighborhood(graph, w2, cohyp_index.get(w1, set())))

        flags.append(ErrorFlag(
            word1=w1, word2=w2, relation=rec.get("relation", ""),
            error_type=error_type, freq1=freq1, freq2=freq2,
            freq_ratio=ratio,
            freq_flagged=bool(ratio is not None and ratio > ratio_threshold),
            leakage_count=leakage,
        ))
    return flags


def _partner_cohyps_in_neighborhood(graph, word, partner_cohyps):
    if not partner_cohyps:
        return 0
    nbr_ids, _ = graph.neighbors(word)
    return sum(1 for nid in nbr_ids if graph.words[nid] in partner_cohyps)


def write_flags(flags, path):
    """TSV with a one-line JSON header comment is both greppable and parseable."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("word1\tword2\trelation\terror\tfreq1\tfreq2\tratio\tflagged\tleakage\n")
        for f in flags:
            ratio = f"{f.freq_ratio:.3f}" if f.freq_ratio is not None else "n/a"
            leak = str(f.leakage_count) if f.leakage_count is not None else "n/a"
            fh.write(f"{f.word1}\t{f.word2}\t{f.relation}\t{f.error_type}\t"
                     f"{f.freq1 if f.freq1 is not None else 'n/a'}\t"
                     f"{f.freq2 if f.freq2 is not None else 'n/a'}\t"
                     f"{ratio}\t{int(f.freq_flagged)}\t{leak}\n")


def write_flags_json(flags, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([f.to_dict() for f in flags], fh, indent=2, sort_keys=True)
        fh.write("\n")
