"""Config-file pipeline with content-hash stage caching.

Stages run in fixed dependency order (ingest -> graph -> embed -> evaluate).
A stage is skipped when its outputs exist and the provenance sidecar shows
the same parameters and input/output content hashes; `force` rebuilds all.
"""

import logging
import os

from cohypo import provenance
from cohypo.counts import CountTable, ingest_counts_file
from cohypo.datasets import load_pairs
from cohypo.errors import ConfigError, MissingInputError
from cohypo.experiments import ExperimentConfig, run_experiment
from cohypo.graph import DTGraph, build_dt_graph
from cohypo.rankings import build_feature_rankings
from cohypo.sgns import EmbeddingMatrix, SgnsConfig, train_sgns
from cohypo.walks import WalkConfig, generate_walks, precompute_transitions

log = logging.getLogger("cohypo.pipeline")

STAGE_ORDER = ("ingest", "graph", "embed", "evaluate")

_STAGE_KEYS = {
    "pipeline": {"seed", "threads", "data_dir"},
    "ingest": {"input", "out", "skip_bad_lines"},
    "graph": {"counts", "k_features", "n_neighbors", "out"},
    "embed": {"graph", "dim", "window", "negatives", "epochs", "lr_start",
              "lr_end", "noise_exponent", "walk_length", "walks_per_node",
              "p", "q", "out"},
    "evaluate": {"pairs", "emb", "counts", "k_features", "model", "op",
                 "experiment", "folds", "out"},
}


def parse_config(path):
    """Parse `key = value` sections; unknown keys fail with their line number."""
    if not os.path.exists(path):
        raise MissingInputError(f"config file not found: {path}")
    sections = {}
    current = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith(("#", ";")):
                continue
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1].strip()
                if current not in _STAGE_KEYS:
                    raise ConfigError(
                        f"{path}:{lineno}: unknown section [{current}] "
                        f"(allowed: {', '.join(_STAGE_KEYS)})")
                if current in sections:
                    raise ConfigError(f"{path}:{lineno}: duplicate section [{current}]")
                sections[current] = {}
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected `key = value`, got {line!r}")
            if current is None:
                raise ConfigError(f"{path}:{lineno}: key outside any [section]")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _STAGE_KEYS[current]:
                raise ConfigError(
                    f"{path}:{lineno}: unknown key {key!r} in [{current}]")
            if key in sections[current]:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            sections[current][key] = value
    return sections


def run_pipeline(config_path, force=False, threads=None):
    """Execute the configured stages; returns {stage: "ran" | "skipped"}."""
    sections = parse_config(config_path)
    shared = sections.get("pipeline", {})
    seed = _as_int(shared.get("seed", "0"), "pipeline.seed")
    if threads is None:
        threads = _as_int(shared.get("threads", "1"), "pipeline.threads")
    base = shared.get("data_dir") or os.path.dirname(os.path.abspath(config_path))

    def resolve(p):
        return p if os.path.isabs(p) else os.path.join(base, p)

    status = {}
    for stage in STAGE_ORDER:
        if stage not in sections:
            continue
        params = dict(sections[stage])
        runner = _RUNNERS[stage]
        spec = runner(params, resolve, seed, threads, dry=True)
        if not force and _cache_valid(spec):
            log.info("stage %s: cached, skipping", stage)
            status[stage] = "skipped"
            continue
        log.info("stage %s: running", stage)
        runner(params, resolve, seed, threads, dry=False)
        provenance.write_provenance(spec["primary_out"], f"pipeline:{stage}",
                                    spec["params"], spec["inputs"], spec["outputs"])
        status[stage] = "ran"
    return status


def _cache_valid(spec):
    for out in spec["outputs"]:
        if not os.path.exists(out):
            return False
    prov = provenance.read_provenance(spec["primary_out"])
    if prov is None or prov.get("params") != spec["params"]:
        return False
    for path in spec["inputs"]:
        if not os.path.exists(path):
            return False
        name = os.path.basename(path)
        if prov.get("inputs", {}).get(name) != provenance.sha256_file(path):
            return False
    for path in spec["outputs"]:
        name = os.path.basename(path)
        if prov.get("outputs", {}).get(name) != provenance.sha256_file(path):
            return False
    return True


def _stage_ingest(params, resolve, seed, threads, dry):
    src = resolve(_require(params, "input", "ingest"))
    out = resolve(_require(params, "out", "ingest"))
    skip_bad = _as_bool(params.get("skip_bad_lines", "false"), "ingest.skip_bad_lines")
    spec = {"params": {"input": src, "out": out, "skip_bad_lines": skip_bad},
            "inputs": [src], "outputs": [out], "primary_out": out}
    if dry:
        return spec
    table = ingest_counts_file(src, skip_bad_lines=skip_bad)
    table.save(out)
    return spec


def _stage_graph(params, resolve, seed, threads, dry):
    counts = resolve(_require(params, "counts", "graph"))
    out = resolve(_require(params, "out", "graph"))
    k_features = _as_int(params.get("k_features", "1000"), "graph.k_features")
    n_neighbors = _as_int(params.get("n_neighbors", "200"), "graph.n_neighbors")
    edges_out = out + ".edges.tsv"
    spec = {"params": {"counts": counts, "out": out, "k_features": k_features,
                       "n_neighbors": n_neighbors},
            "inputs": [counts], "outputs": [out, edges_out], "primary_out": out}
    if dry:
        return spec
    table = CountTable.load(counts)
    rankings = build_feature_rankings(table, k_features)
    graph = build_dt_graph(rankings, n_neighbors)
    graph.save(out)
    graph.write_edges_tsv(edges_out)
    return spec


def _stage_embed(params, resolve, seed, threads, dry):
    graph_path = resolve(_require(params, "graph", "embed"))
    out = resolve(_require(params, "out", "embed"))
    wcfg_args = {
        "walk_length": _as_int(params.get("walk_length", "80"), "embed.walk_length"),
        "walks_per_node": _as_int(params.get("walks_per_node", "10"), "embed.walks_per_node"),
        "p": _as_float(params.get("p", "1.0"), "embed.p"),
        "q": _as_float(params.get("q", "1.0"), "embed.q"),
        "seed": seed,
    }
    scfg_args = {
        "dim": _as_int(params.get("dim", "128"), "embed.dim"),
        "window": _as_int(params.get("window", "10"), "embed.window"),
        "negatives": _as_int(params.get("negatives", "5"), "embed.negatives"),
        "epochs": _as_int(params.get("epochs", "5"), "embed.epochs"),
        "lr_start": _as_float(params.get("lr_start", "0.025"), "embed.lr_start"),
        "lr_end": _as_float(params.get("lr_end", "0.0001"), "embed.lr_end"),
        "noise_exponent": _as_float(params.get("noise_exponent", "0.75"),
                                    "embed.noise_exponent"),
        "seed": seed,
    }
    sidecar = out + ".bin"
    spec = {"params": {"graph": graph_path, "out": out, **wcfg_args, **scfg_args},
            "inputs": [graph_path], "outputs": [out, sidecar], "primary_out": out}
    if dry:
        return spec
    graph = DTGraph.load(graph_path)
    wcfg = WalkConfig(**wcfg_args)
    table = precompute_transitions(graph, wcfg.p, wcfg.q)
    corpus = generate_walks(graph, table, wcfg, threads=threads)
    if corpus.isolated_nodes.size:
        log.info("embed: %d isolated nodes produce no walks", corpus.isolated_nodes.size)
    emb = train_sgns(corpus, SgnsConfig(**scfg_args), threads=threads)
    emb.save_text(out)
    emb.save_binary(sidecar)
    return spec


def _stage_evaluate(params, resolve, seed, threads, dry):
    pairs_path = resolve(_require(params, "pairs", "evaluate"))
    out = resolve(_require(params, "out", "evaluate"))
    model = params.get("model", "rf")
    emb_path = resolve(params["emb"]) if "emb" in params else None
    counts_path = resolve(params["counts"]) if "counts" in params else None
    k_features = _as_int(params.get("k_features", "1000"), "evaluate.k_features")
    cfg_args = {
        "experiment": params.get("experiment", "custom"),
        "model": model,
        "op": params.get("op", "cc"),
        "folds": _as_int(params.get("folds", "10"), "evaluate.folds"),
        "seed": seed,
    }
    inputs = [pairs_path] + ([emb_path] if emb_path else []) \
        + ([counts_path] if counts_path else [])
    spec = {"params": {"pairs": pairs_path, "out": out, "emb": emb_path,
                       "counts": counts_path, "k_features": k_features, **cfg_args},
            "inputs": inputs, "outputs": [out], "primary_out": out}
    if dry:
        return spec

    dataset = load_pairs(pairs_path)
    cfg = ExperimentConfig(**cfg_args)
    emb = EmbeddingMatrix.load(emb_path) if emb_path else None
    rankings = None
    if model == "linp":
        if counts_path is None:
            raise ConfigError("evaluate.model = linp requires evaluate.counts")
        rankings = build_feature_rankings(CountTable.load(counts_path), k_features)
    prov_inputs = {os.path.basename(p): provenance.sha256_file(p) for p in inputs}
    report = run_experiment(dataset, cfg, emb=emb, rankings=rankings,
                            threads=threads, provenance=prov_inputs)
    report.save(out)
    return spec


_RUNNERS = {
    "ingest": _stage_ingest,
    "graph": _stage_graph,
    "embed": _stage_embed,
    "evaluate": _stage_evaluate,
}


def _require(params, key, stage):
    if key not in params:
        raise ConfigError(f"[{stage}] is missing required key {key!r}")
    return params[key]


def _as_int(text, what):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{what} must be an integer, got {text!r}") from None


def _as_float(text, what):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{what} must be a number, got {text!r}") from None


def _as_bool(text, what):
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"{what} must be a boolean, got {text!r}")
