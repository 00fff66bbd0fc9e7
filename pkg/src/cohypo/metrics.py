"""Binary classification metrics with fixed zero-division conventions."""

import numpy as np

from cohypo.errors import ContractError


def confusion(predictions, gold):
    """(tp, fp, fn, tn) with class 1 as positive."""
    pred = np.asarray(predictions, dtype=np.int64)
    gold = np.asarray(gold, dtype=np.int64)
    if pred.size != gold.size or pred.size == 0:
        raise ContractError("predictions and gold must have equal positive length")
    tp = int(np.sum((pred == 1) & (gold == 1)))
    fp = int(np.sum((pred == 1) & (gold == 0)))
    fn = int(np.sum((pred == 0) & (gold == 1)))
    tn = int(np.sum((pred == 0) & (gold == 0)))
    return tp, fp, fn, tn


def metrics(predictions, gold):
    """(accuracy, f1_percent) for the positive class.

    Precision or recall with an empty denominator counts as 0, and so does F1
    when both are 0.
    """
    tp, fp, fn, tn = confusion(predictions, gold)
    total = tp + fp + fn + tn
    accuracy = (tp + tn) / total
    return accuracy, _f1(tp, fp, fn) * 100.0


def macro_f1_percent(predictions, gold):
    """Unweighted mean of both classes' F1 scores, as a percentage."""
    tp, fp, fn, tn = confusion(predictions, gold)
    f1_pos = _f1(tp, fp, fn)
    f1_neg = _f1(tn, fn, fp)  # negative class: swap roles
    return (f1_pos + f1_neg) / 2.0 * 100.0


def _f1(tp, fp, fn):
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)
