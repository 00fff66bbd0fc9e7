"""Cross-validated experiment runner and its report format.

Experiment presets fix the relation subset and headline metric:
exp1 (all relations vs cohyp, accuracy), exp2-random / exp2-hyper (binary F1%),
exp3-random / exp3-mero / exp3-hyper (binary accuracy), custom (no filter).
"""

import json
from dataclasses import dataclass, field

import numpy as np

from cohypo._rng import derive_seed
from cohypo.classifiers import (
    KnnModel,
    PegasosConfig,
    RandomForestConfig,
    ThresholdModel,
    cosine,
    fit_threshold,
    lin_similarity,
    train_linear_svm,
    train_random_forest,
)
from cohypo.compose import CompositionOp, OovReport, featurize_dataset
from cohypo.errors import ContractError
from cohypo.folds import stratified_kfold
from cohypo.metrics import macro_f1_percent, metrics

MODELS = ("svm", "rf", "knn", "cosinep", "linp")

EXPERIMENTS = {
    "exp1": {"keep": None, "headline": "accuracy"},
    "exp2-random": {"keep": ("cohyp", "random"), "headline": "f1_percent"},
    "exp2-hyper": {"keep": ("cohyp", "hyper"), "headline": "f1_percent"},
    "exp3-random": {"keep": ("cohyp", "random"), "headline": "accuracy"},
    "exp3-mero": {"keep": ("cohyp", "mero"), "headline": "accuracy"},
    "exp3-hyper": {"keep": ("cohyp", "hyper"), "headline": "accuracy"},
    "custom": {"keep": None, "headline": "accuracy"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "custom"
    model: str = "rf"
    op: str = "cc"
    folds: int = 10
    seed: int = 0
    l2_normalize: bool = False
    model_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ContractError(
                f"unknown experiment {self.experiment!r} (one of: {', '.join(EXPERIMENTS)})")
        if self.model not in MODELS:
            raise ContractError(f"unknown model {self.model!r} (one of: {', '.join(MODELS)})")
        if self.folds < 2:
            raise ContractError("folds must be >= 2")
        CompositionOp.parse(self.op)


@dataclass
class FoldResult:
    fold: int
    accuracy: float | None
    f1_percent: float | None
    macro_f1_percent: float | None
    n_test: int
    n_oov: int


@dataclass
class EvalReport:
    experiment: str
    headline_metric: str
    folds: list
    mean_accuracy: float | None
    mean_f1_percent: float | None
    mean_macro_f1_percent: float | None
    pooled_accuracy: float | None
    pooled_f1_percent: float | None
    n_records: int
    n_kept: int
    n_oov: int
    config: dict
    oov_pairs: list = field(default_factory=list)
    predictions: list = field(default_factory=list)

    @property
    def headline(self):
        return getattr(self, f"mean_{self.headline_metric}")

    def to_dict(self):
        return {
            "experiment": self.experiment,
            "headline_metric": self.headline_metric,
            "headline": self.headline,
            "aggregate": {
                "mean_accuracy": self.mean_accuracy,
                "mean_f1_percent": self.mean_f1_percent,
                "mean_macro_f1_percent": self.mean_macro_f1_percent,
                "pooled_accuracy": self.pooled_accuracy,
                "pooled_f1_percent": self.pooled_f1_percent,
            },
            "counts": {"n_records": self.n_records, "n_kept": self.n_kept,
                       "n_oov": self.n_oov},
            "folds": [vars(f) for f in self.folds],
            "config": self.config,
            "oov_pairs": self.oov_pairs,
            "predictions": self.predictions,
        }

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        folds = [FoldResult(**f) for f in doc["folds"]]
        agg = doc["aggregate"]
        counts = doc["counts"]
        return cls(doc["experiment"], doc["headline_metric"], folds,
                   agg["mean_accuracy"], agg["mean_f1_percent"],
                   agg["mean_macro_f1_percent"], agg["pooled_accuracy"],
                   agg["pooled_f1_percent"], counts["n_records"],
                   counts["n_kept"], counts["n_oov"], doc["config"],
                   doc.get("oov_pairs", []), doc.get("predictions", []))


class AccessAudit:
    """Records which record indices each fold's training phase received."""

    def __init__(self):
        self.fold_accesses = []  # (fold, train_indices, test_indices)

    def on_fold(self, fold, train_idx, test_idx):
        self.fold_accesses.append((fold, np.array(train_idx), np.array(test_idx)))


def run_experiment(dataset, cfg, emb=None, rankings=None, threads=1,
                   audit=None, provenance=None):
    """Ten-fold (by default) stratified CV of one model on one dataset.

    Pairs with an out-of-vocabulary word are excluded from both training and
    testing and reported per fold. Threshold models are tuned on training
    folds only.
    """
    preset = EXPERIMENTS[cfg.experiment]
    if preset["keep"] is not None:
        dataset = dataset.filter_relations(preset["keep"])
    records = dataset.records
    if not records:
        raise ContractError("no records left after relation filtering")

    needs_emb = cfg.model in ("svm", "rf", "knn", "cosinep")
    if needs_emb and emb is None:
        raise ContractError(f"model {cfg.model} requires an embedding")
    if cfg.model == "linp" and rankings is None:
        raise ContractError("model linp requires feature rankings")

    labels_all = dataset.labels()
    fold_of = stratified_kfold(labels_all, cfg.folds, cfg.seed)

    op = CompositionOp.parse(cfg.op)
    if cfg.model in ("svm", "rf", "knn"):
        X, y, kept_idx, oov = featurize_dataset(records, emb, op, cfg.l2_normalize)
        scores = None
    else:
        scores, y, kept_idx, oov = _score_pairs(records, cfg.model, emb, rankings)
        X = None

    kept_fold = fold_of[kept_idx]
    oov_idx = np.setdiff1d(np.arange(len(records)), kept_idx)
    oov_fold_counts = np.bincount(fold_of[oov_idx], minlength=cfg.folds)

    fold_results = []
    predictions = []
    pooled_pred, pooled_gold = [], []
    for fold in range(cfg.folds):
        test_mask = kept_fold == fold
        train_mask = ~test_mask
        if audit is not None:
            audit.on_fold(fold, kept_idx[train_mask], kept_idx[test_mask])
        n_test = int(test_mask.sum())
        n_oov = int(oov_fold_counts[fold])
        if n_test == 0 or np.unique(y[train_mask]).size < 2:
            fold_results.append(FoldResult(fold, None, None, None, n_test, n_oov))
            continue

        model_seed = derive_seed(cfg.seed, "model", fold)
        if cfg.model in ("svm", "rf", "knn"):
            model = _train_vector_model(cfg, X[train_mask], y[train_mask], model_seed, threads)
            pred = model.predict(X[test_mask])
        else:
            p = fit_threshold(list(zip(scores[train_mask], y[train_mask])))
            model = ThresholdModel(cfg.model, p)
            pred = model.predict_scores(scores[test_mask])

        gold = y[test_mask]
        acc, f1 = metrics(pred, gold)
        fold_results.append(FoldResult(fold, acc, f1, macro_f1_percent(pred, gold),
                                       n_test, n_oov))
        pooled_pred.append(pred)
        pooled_gold.append(gold)
        for local, rec_idx in enumerate(kept_idx[test_mask]):
            rec = records[rec_idx]
            predictions.append({
                "word1": rec.word1, "word2": rec.word2, "relation": rec.relation,
                "gold": int(gold[local]), "pred": int(pred[local]), "fold": fold,
            })

    scored_folds = [f for f in fold_results if f.accuracy is not None]
    if pooled_pred:
        pooled_pred = np.concatenate(pooled_pred)
        pooled_gold = np.concatenate(pooled_gold)
        pooled_acc, pooled_f1 = metrics(pooled_pred, pooled_gold)
    else:
        pooled_acc = pooled_f1 = None

    config = {
        "experiment": cfg.experiment, "model": cfg.model, "op": cfg.op,
        "folds": cfg.folds, "seed": cfg.seed, "l2_normalize": cfg.l2_normalize,
        "model_params": dict(cfg.model_params), "source": dataset.source,
    }
    if provenance:
        config["inputs"] = provenance

    return EvalReport(
        experiment=cfg.experiment,
        headline_metric=preset["headline"],
        folds=fold_results,
        mean_accuracy=_mean(scored_folds, "accuracy"),
        mean_f1_percent=_mean(scored_folds, "f1_percent"),
        mean_macro_f1_percent=_mean(scored_folds, "macro_f1_percent"),
        pooled_accuracy=pooled_acc,
        pooled_f1_percent=pooled_f1,
        n_records=len(records),
        n_kept=int(kept_idx.size),
        n_oov=len(records) - int(kept_idx.size),
        config=config,
        oov_pairs=oov.to_dict()["pairs"],
        predictions=predictions,
    )


def _train_vector_model(cfg, X_train, y_train, model_seed, threads):
    params = cfg.model_params
    if cfg.model == "svm":
        pcfg = PegasosConfig(lambda_=params.get("lambda_", 1e-4),
                             epochs=params.get("epochs", 100),
                             seed=model_seed)
        return train_linear_svm(X_train, y_train, pcfg)
    if cfg.model == "rf":
        rcfg = RandomForestConfig(n_trees=params.get("n_trees", 100),
                                  max_depth=params.get("max_depth"),
                                  mtry=params.get("mtry"),
                                  seed=model_seed,
                                  threads=threads)
        return train_random_forest(X_train, y_train, rcfg)
    return KnnModel(X_train, y_train, params.get("k", 5))


def _score_pairs(records, model, emb, rankings):
    """Per-pair scores for threshold models, with OOV exclusion."""
    report = OovReport()
    scores, labels, kept = [], [], []
    for idx, rec in enumerate(records):
        if model == "cosinep":
            missing = [w for w in (rec.word1, rec.word2) if w not in emb]
            if missing:
                report.excluded.append((rec.word1, rec.word2, missing))
                continue
            score = cosine(emb.vector(rec.word1), emb.vector(rec.word2))
        else:
            missing = [w for w in (rec.word1, rec.word2)
                       if w not in rankings.word_index]
            if missing:
                report.excluded.append((rec.word1, rec.word2, missing))
                continue
            score = lin_similarity(rec.word1, rec.word2, rankings)
        scores.append(score)
        labels.append(rec.label)
        kept.append(idx)
    return (np.asarray(scores, dtype=np.float64),
            np.asarray(labels, dtype=np.int64),
            np.asarray(kept, dtype=np.int64), report)


def _mean(folds, attr):
    if not folds:
        return None
    return float(np.mean([getattr(f, attr) for f in folds]))
