"""Command-line entry point: one subcommand per pipeline stage.

Exit codes: 0 ok, 2 usage, 3 missing/unreadable input, 4 format error,
5 contract violation, 6 diverged training, 1 unexpected failure. Errors
print a single machine-parsable line `cohypo: error [category]: message`
to stderr.
"""

import argparse
import logging
import os
import sys

import numpy as np

import cohypo
from cohypo import provenance
from cohypo.errors import CohypoError, ContractError, InputFormatError, MissingInputError

EXIT_CODES = {
    "io": 3,
    "format": 4,
    "contract": 5,
    "diverged": 6,
    "internal": 1,
}

log = logging.getLogger("cohypo")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, args.log_level.upper()),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except CohypoError as exc:
        print(f"cohypo: error [{exc.category}]: {exc}", file=sys.stderr)
        return EXIT_CODES.get(exc.category, 1)
    except OSError as exc:
        print(f"cohypo: error [io]: {exc}", file=sys.stderr)
        return EXIT_CODES["io"]
    except Exception as exc:  # pragma: no cover - defensive
        print(f"cohypo: error [internal]: {exc}", file=sys.stderr)
        return EXIT_CODES["internal"]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cohypo",
        description="Build a distributional-thesaurus graph, embed its nodes, "
                    "and classify word pairs as co-hyponyms vs. other relations.",
    )
    parser.add_argument("--version", action="version", version=f"cohypo {cohypo.__version__}")
    parser.add_argument("--log-level", default="info",
                        choices=["debug", "info", "warning", "error"],
                        help="stderr log verbosity (default: info)")
    parser.add_argument("--data-dir", default=None,
                        help="base directory for relative paths "
                             "(default: $COHYPO_DATA_DIR or the current directory)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="aggregate word/feature/count records")
    p.add_argument("--input", required=True, help="TSV `word TAB feature TAB count`, gzip ok")
    p.add_argument("--out", required=True, help="output count table (binary)")
    p.add_argument("--skip-bad-lines", action="store_true",
                   help="log malformed lines instead of aborting")
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser("build-graph", help="build the similarity graph from counts")
    p.add_argument("--counts", required=True, help="count table from `ingest`")
    p.add_argument("--k-features", type=int, default=1000,
                   help="ranked features kept per word (default: 1000)")
    p.add_argument("--n-neighbors", type=int, default=200,
                   help="neighbors kept per word before symmetrization (default: 200)")
    p.add_argument("--out", required=True, help="output graph; also writes <out>.edges.tsv")
    p.set_defaults(handler=cmd_build_graph)

    p = sub.add_parser("embed", help="train node embeddings over biased walks")
    p.add_argument("--graph", required=True)
    p.add_argument("--dim", type=int, default=128, help="vector dimension (default: 128)")
    p.add_argument("--window", type=int, default=10, help="context radius (default: 10)")
    p.add_argument("--negatives", type=int, default=5,
                   help="negative samples per pair (default: 5)")
    p.add_argument("--epochs", type=int, default=5, help="training passes (default: 5)")
    p.add_argument("--walk-length", type=int, default=80, help="steps per walk (default: 80)")
    p.add_argument("--walks-per-node", type=int, default=10,
                   help="walks started at each node (default: 10)")
    p.add_argument("--p", type=float, default=1.0, help="return bias (default: 1.0)")
    p.add_argument("--q", type=float, default=1.0, help="in-out bias (default: 1.0)")
    p.add_argument("--lr-start", type=float, default=0.025,
                   help="initial learning rate (default: 0.025)")
    p.add_argument("--lr-end", type=float, default=0.0001,
                   help="final learning rate (default: 0.0001)")
    p.add_argument("--noise-exponent", type=float, default=0.75,
                   help="unigram distortion for negatives (default: 0.75)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1,
                   help="1 = deterministic; >1 uses lock-free shared updates")
    p.add_argument("--out", required=True,
                   help="text vectors; a binary sidecar goes to <out>.bin")
    p.set_defaults(handler=cmd_embed)

    p = sub.add_parser("project", help="2-D principal-component projection of words")
    p.add_argument("--emb", required=True)
    p.add_argument("--words-file", required=True, help="one word per line")
    p.add_argument("--out", required=True, help="TSV `word x y`")
    p.set_defaults(handler=cmd_project)

    p = sub.add_parser("compose", help="compose pair feature vectors")
    p.add_argument("--pairs", required=True, help="TSV `word1 TAB word2 TAB relation`")
    p.add_argument("--emb", required=True)
    p.add_argument("--op", required=True, choices=["diff", "cc", "add", "mul", "sing"])
    p.add_argument("--l2-normalize", action="store_true",
                   help="L2-normalize vectors before composing (default: off)")
    p.add_argument("--out", required=True, help="TSV feature matrix with label column")
    p.set_defaults(handler=cmd_compose)

    p = sub.add_parser("train", help="train one classifier on composed features")
    p.add_argument("--model", required=True, choices=["svm", "rf", "knn", "cosinep", "linp"])
    p.add_argument("--features", help="feature TSV from `compose` "
                                      "(cosinep needs op=cc features)")
    p.add_argument("--pairs", help="pair TSV (linp only)")
    p.add_argument("--counts", help="count table (linp only)")
    p.add_argument("--k-features", type=int, default=1000,
                   help="ranking depth for linp (default: 1000)")
    p.add_argument("--svm-lambda", type=float, default=1e-4,
                   help="SVM regularization (default: 1e-4)")
    p.add_argument("--svm-epochs", type=int, default=100,
                   help="SVM passes over the data (default: 100)")
    p.add_argument("--rf-trees", type=int, default=100, help="forest size (default: 100)")
    p.add_argument("--rf-max-depth", type=int, default=None,
                   help="depth cap (default: unlimited)")
    p.add_argument("--rf-mtry", type=int, default=None,
                   help="features per split (default: floor(sqrt(d)))")
    p.add_argument("--knn-k", type=int, default=5, help="neighbors (default: 5)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True, help="output model file")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("evaluate", help="ten-fold cross-validated evaluation")
    p.add_argument("--experiment", default="custom",
                   choices=["exp1", "exp2-random", "exp2-hyper", "exp3-random",
                            "exp3-mero", "exp3-hyper", "custom"])
    p.add_argument("--pairs", required=True)
    p.add_argument("--emb", help="embedding (needed for svm/rf/knn/cosinep)")
    p.add_argument("--counts", help="count table (needed for linp)")
    p.add_argument("--k-features", type=int, default=1000,
                   help="ranking depth for linp (default: 1000)")
    p.add_argument("--model", required=True,
                   choices=["svm", "rf", "knn", "cosinep", "linp"])
    p.add_argument("--op", default="cc", choices=["diff", "cc", "add", "mul", "sing"])
    p.add_argument("--l2-normalize", action="store_true")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--relation-map", default=None,
                   help="adapter: comma-separated foreign=canonical tag pairs")
    p.add_argument("--strip-pos-suffix", action="store_true",
                   help="adapter: drop trailing -pos markers from tokens")
    p.add_argument("--svm-lambda", type=float, default=1e-4)
    p.add_argument("--svm-epochs", type=int, default=100)
    p.add_argument("--rf-trees", type=int, default=100)
    p.add_argument("--rf-max-depth", type=int, default=None)
    p.add_argument("--rf-mtry", type=int, default=None)
    p.add_argument("--knn-k", type=int, default=5)
    p.add_argument("--out", required=True, help="report JSON")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("overlap", help="pair overlap between two datasets")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--relation-map", default=None)
    p.add_argument("--strip-pos-suffix", action="store_true")
    p.set_defaults(handler=cmd_overlap)

    p = sub.add_parser("analyze-errors", help="frequency/leakage analysis of a report")
    p.add_argument("--report", required=True, help="report JSON from `evaluate`")
    p.add_argument("--counts", help="count table for frequency ratios")
    p.add_argument("--graph", help="graph for neighborhood leakage")
    p.add_argument("--ratio-threshold", type=float, default=10.0,
                   help="flag pairs with frequency ratio above this (default: 10)")
    p.add_argument("--out", required=True, help="TSV of flagged pairs")
    p.set_defaults(handler=cmd_analyze_errors)

    p = sub.add_parser("synth", help="generate the planted synthetic benchmark")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--words", type=int, default=500)
    p.add_argument("--classes", type=int, default=20)
    p.add_argument("--pairs-per-split", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("run", help="run a config-file pipeline with stage caching")
    p.add_argument("--config", required=True, help="INI-style `key = value` sections")
    p.add_argument("--force", action="store_true", help="ignore cached stages")
    p.add_argument("--threads", type=int, default=None,
                   help="override [pipeline] threads")
    p.set_defaults(handler=cmd_run)

    return parser


def _resolve(args, path):
    if path is None or os.path.isabs(path):
        return path
    base = args.data_dir or os.environ.get("COHYPO_DATA_DIR")
    return os.path.join(base, path) if base else path


def _check_exists(path):
    if not os.path.exists(path):
        raise MissingInputError(f"input file not found: {path}")
    return path


def cmd_ingest(args):
    from cohypo.counts import ingest_counts_file

    src = _check_exists(_resolve(args, args.input))
    out = _resolve(args, args.out)
    bad = []
    table = ingest_counts_file(src, skip_bad_lines=args.skip_bad_lines, bad_lines=bad)
    for lineno, problem in bad:
        log.warning("skipped line %d: %s", lineno, problem)
    table.save(out)
    provenance.write_provenance(out, "ingest",
                                {"input": src, "skip_bad_lines": args.skip_bad_lines},
                                [src], [out])
    log.info("ingested %d words, %d features, total count %d",
             table.n_words, table.n_features, table.total)
    return 0


def cmd_build_graph(args):
    from cohypo.counts import CountTable
    from cohypo.graph import build_dt_graph
    from cohypo.rankings import build_feature_rankings

    counts_path = _check_exists(_resolve(args, args.counts))
    out = _resolve(args, args.out)
    table = CountTable.load(counts_path)
    rankings = build_feature_rankings(table, args.k_features)
    graph = build_dt_graph(rankings, args.n_neighbors)
    graph.save(out)
    graph.write_edges_tsv(out + ".edges.tsv")
    provenance.write_provenance(out, "build-graph",
                                {"counts": counts_path, "k_features": args.k_features,
                                 "n_neighbors": args.n_neighbors},
                                [counts_path], [out, out + ".edges.tsv"])
    log.info("graph: %d nodes, %d edges", graph.n_nodes, graph.n_edges)
    return 0


def cmd_embed(args):
    from cohypo.graph import DTGraph
    from cohypo.sgns import SgnsConfig, train_sgns
    from cohypo.walks import WalkConfig, generate_walks, precompute_transitions

    graph_path = _check_exists(_resolve(args, args.graph))
    out = _resolve(args, args.out)
    graph = DTGraph.load(graph_path)
    wcfg = WalkConfig(walk_length=args.walk_length, walks_per_node=args.walks_per_node,
                      p=args.p, q=args.q, seed=args.seed)
    scfg = SgnsConfig(dim=args.dim, window=args.window, negatives=args.negatives,
                      epochs=args.epochs, lr_start=args.lr_start, lr_end=args.lr_end,
                      noise_exponent=args.noise_exponent, seed=args.seed)
    table = precompute_transitions(graph, wcfg.p, wcfg.q)
    corpus = generate_walks(graph, table, wcfg, threads=args.threads)
    if corpus.isolated_nodes.size:
        log.info("%d isolated nodes produce no walks", corpus.isolated_nodes.size)
    emb = train_sgns(corpus, scfg, threads=args.threads)
    emb.save_text(out)
    emb.save_binary(out + ".bin")
    params = {"graph": graph_path, **wcfg.__dict__, **scfg.to_dict(),
              "threads": args.threads}
    provenance.write_provenance(out, "embed", params, [graph_path],
                                [out, out + ".bin"])
    log.info("trained %d vectors of dim %d; epoch losses: %s",
             len(emb.words), emb.dim,
             " ".join(f"{loss:.4f}" for loss in emb.epoch_losses))
    return 0


def cmd_project(args):
    from cohypo.projection import project_2d, write_projection_tsv
    from cohypo.sgns import EmbeddingMatrix

    emb_path = _check_exists(_resolve(args, args.emb))
    words_path = _check_exists(_resolve(args, args.words_file))
    out = _resolve(args, args.out)
    emb = EmbeddingMatrix.load(emb_path)
    with open(words_path, "r", encoding="utf-8") as fh:
        words = [line.strip() for line in fh if line.strip()]
    if not words:
        raise ContractError(f"no words in {words_path}")
    points = project_2d(emb, words)
    write_projection_tsv(points, out)
    provenance.write_provenance(out, "project",
                                {"emb": emb_path, "words_file": words_path},
                                [emb_path, words_path], [out])
    return 0


def cmd_compose(args):
    from cohypo.compose import CompositionOp, featurize_dataset
    from cohypo.datasets import load_pairs
    from cohypo.sgns import EmbeddingMatrix

    pairs_path = _check_exists(_resolve(args, args.pairs))
    emb_path = _check_exists(_resolve(args, args.emb))
    out = _resolve(args, args.out)
    dataset = load_pairs(pairs_path)
    emb = EmbeddingMatrix.load(emb_path)
    op = CompositionOp.parse(args.op)
    X, y, kept, report = featurize_dataset(dataset.records, emb, op, args.l2_normalize)
    if report.n_excluded:
        log.warning("%d pairs excluded as out-of-vocabulary", report.n_excluded)
    if X.shape[0] == 0:
        log.warning("all pairs were out-of-vocabulary; writing an empty matrix")
    with open(out, "w", encoding="utf-8") as fh:
        width = X.shape[1] if X.size else op.output_dim(emb.dim)
        header = ["word1", "word2", "label"] + [f"f{i:03d}" for i in range(width)]
        fh.write("\t".join(header) + "\n")
        for row_idx, rec_idx in enumerate(kept):
            rec = dataset.records[rec_idx]
            values = "\t".join(format(x, ".10g") for x in X[row_idx])
            fh.write(f"{rec.word1}\t{rec.word2}\t{y[row_idx]}\t{values}\n")
    provenance.write_provenance(out, "compose",
                                {"pairs": pairs_path, "emb": emb_path, "op": args.op,
                                 "l2_normalize": args.l2_normalize,
                                 "n_oov": report.n_excluded},
                                [pairs_path, emb_path], [out])
    return 0


def read_feature_tsv(path):
    """Read a `compose` output back into (pairs, X, y)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header[:3] != ["word1", "word2", "label"]:
            raise InputFormatError("not a compose feature file", path=path, line=1)
        pairs, rows, labels = [], [], []
        for lineno, line in enumerate(fh, 2):
            fields = line.rstrip("\n").split("\t")
            if len(fields) != len(header):
                raise InputFormatError(f"expected {len(header)} fields", path=path, line=lineno)
            pairs.append((fields[0], fields[1]))
            labels.append(int(fields[2]))
            rows.append([float(x) for x in fields[3:]])
    X = np.asarray(rows, dtype=np.float64) if rows else np.zeros((0, len(header) - 3))
    return pairs, X, np.asarray(labels, dtype=np.int64)


def cmd_train(args):
    from cohypo.classifiers import (
        KnnModel,
        PegasosConfig,
        RandomForestConfig,
        ThresholdModel,
        cosine,
        fit_threshold,
        lin_similarity,
        save_model,
        train_linear_svm,
        train_random_forest,
    )

    out = _resolve(args, args.out)
    inputs = []
    if args.model == "linp":
        if not args.pairs or not args.counts:
            raise ContractError("model linp needs --pairs and --counts")
        from cohypo.counts import CountTable
        from cohypo.datasets import load_pairs
        from cohypo.rankings import build_feature_rankings

        pairs_path = _check_exists(_resolve(args, args.pairs))
        counts_path = _check_exists(_resolve(args, args.counts))
        inputs = [pairs_path, counts_path]
        dataset = load_pairs(pairs_path)
        rankings = build_feature_rankings(CountTable.load(counts_path), args.k_features)
        scored = []
        skipped = 0
        for rec in dataset.records:
            if rec.word1 not in rankings.word_index or rec.word2 not in rankings.word_index:
                skipped += 1
                continue
            scored.append((lin_similarity(rec.word1, rec.word2, rankings), rec.label))
        if skipped:
            log.warning("%d pairs skipped as out-of-vocabulary", skipped)
        model = ThresholdModel("linp", fit_threshold(scored),
                               {"k_features": args.k_features, "seed": args.seed})
    else:
        if not args.features:
            raise ContractError(f"model {args.model} needs --features")
        features_path = _check_exists(_resolve(args, args.features))
        inputs = [features_path]
        _, X, y = read_feature_tsv(features_path)
        if args.model == "svm":
            model = train_linear_svm(X, y, PegasosConfig(args.svm_lambda,
                                                         args.svm_epochs, args.seed))
        elif args.model == "rf":
            model = train_random_forest(X, y, RandomForestConfig(
                args.rf_trees, args.rf_max_depth, args.rf_mtry, args.seed, args.threads))
        elif args.model == "knn":
            model = KnnModel(X, y, args.knn_k, {"seed": args.seed})
        else:  # cosinep over concatenation features
            if X.shape[1] % 2:
                raise ContractError("cosinep needs op=cc features (even width)")
            half = X.shape[1] // 2
            scored = [(cosine(row[:half], row[half:]), label)
                      for row, label in zip(X, y)]
            model = ThresholdModel("cosinep", fit_threshold(scored), {"seed": args.seed})

    save_model(model, out)
    provenance.write_provenance(out, "train",
                                {"model": args.model, "seed": args.seed},
                                inputs, [out])
    log.info("saved %s model to %s", args.model, out)
    return 0


def cmd_evaluate(args):
    from cohypo.counts import CountTable
    from cohypo.datasets import load_pairs, parse_relation_map
    from cohypo.experiments import ExperimentConfig, run_experiment
    from cohypo.rankings import build_feature_rankings
    from cohypo.sgns import EmbeddingMatrix

    pairs_path = _check_exists(_resolve(args, args.pairs))
    out = _resolve(args, args.out)
    needs_emb = args.model in ("svm", "rf", "knn", "cosinep")
    if needs_emb and not args.emb:
        raise ContractError(f"model {args.model} requires --emb")
    if args.model == "linp" and not args.counts:
        raise ContractError("model linp requires --counts")

    relation_map = parse_relation_map(args.relation_map) if args.relation_map else None
    dataset = load_pairs(pairs_path, relation_map=relation_map,
                         strip_pos_suffix=args.strip_pos_suffix)

    inputs = [pairs_path]
    emb = rankings = None
    if needs_emb:
        emb_path = _check_exists(_resolve(args, args.emb))
        inputs.append(emb_path)
        emb = EmbeddingMatrix.load(emb_path)
    if args.model == "linp":
        counts_path = _check_exists(_resolve(args, args.counts))
        inputs.append(counts_path)
        rankings = build_feature_rankings(CountTable.load(counts_path), args.k_features)

    cfg = ExperimentConfig(
        experiment=args.experiment, model=args.model, op=args.op,
        folds=args.folds, seed=args.seed, l2_normalize=args.l2_normalize,
        model_params={"lambda_": args.svm_lambda, "epochs": args.svm_epochs,
                      "n_trees": args.rf_trees, "max_depth": args.rf_max_depth,
                      "mtry": args.rf_mtry, "k": args.knn_k},
    )
    prov_inputs = {os.path.basename(p): provenance.sha256_file(p) for p in inputs}
    report = run_experiment(dataset, cfg, emb=emb, rankings=rankings,
                            threads=args.threads, provenance=prov_inputs)
    report.save(out)
    provenance.write_provenance(out, "evaluate", report.config, inputs, [out])
    log.info("%s %s/%s: headline %s = %s, oov %d",
             args.experiment, args.model, args.op, report.headline_metric,
             f"{report.headline:.4f}" if report.headline is not None else "n/a",
             report.n_oov)
    return 0


def cmd_overlap(args):
    from cohypo.datasets import dataset_overlap, load_pairs, parse_relation_map

    path_a = _check_exists(_resolve(args, args.a))
    path_b = _check_exists(_resolve(args, args.b))
    relation_map = parse_relation_map(args.relation_map) if args.relation_map else None
    a = load_pairs(path_a, relation_map=relation_map,
                   strip_pos_suffix=args.strip_pos_suffix)
    b = load_pairs(path_b, relation_map=relation_map,
                   strip_pos_suffix=args.strip_pos_suffix)
    pct_a, pct_b = dataset_overlap(a, b)
    shared = len(a.unordered_pairs() & b.unordered_pairs())
    print(f"shared_pairs\t{shared}")
    print(f"pct_of_a\t{pct_a:.1f}")
    print(f"pct_of_b\t{pct_b:.1f}")
    return 0


def cmd_analyze_errors(args):
    from cohypo.analysis import error_analysis, write_flags
    from cohypo.counts import CountTable
    from cohypo.experiments import EvalReport
    from cohypo.graph import DTGraph

    report_path = _check_exists(_resolve(args, args.report))
    out = _resolve(args, args.out)
    report = EvalReport.load(report_path)
    counts = graph = None
    inputs = [report_path]
    if args.counts:
        counts_path = _check_exists(_resolve(args, args.counts))
        counts = CountTable.load(counts_path)
        inputs.append(counts_path)
    if args.graph:
        graph_path = _check_exists(_resolve(args, args.graph))
        graph = DTGraph.load(graph_path)
        inputs.append(graph_path)
    flags = error_analysis(report.predictions, counts=counts, graph=graph,
                           ratio_threshold=args.ratio_threshold)
    write_flags(flags, out)
    provenance.write_provenance(out, "analyze-errors",
                                {"report": report_path,
                                 "ratio_threshold": args.ratio_threshold},
                                inputs, [out])
    log.info("%d misclassified pairs analyzed, %d flagged for frequency skew",
             len(flags), sum(f.freq_flagged for f in flags))
    return 0


def cmd_synth(args):
    from cohypo.synth import SynthConfig, generate

    out_dir = _resolve(args, args.out_dir)
    cfg = SynthConfig(n_words=args.words, n_classes=args.classes,
                      pairs_per_split=args.pairs_per_split, seed=args.seed)
    paths = generate(cfg, out_dir)
    provenance.write_provenance(paths["counts"], "synth", vars(cfg), [],
                                list(paths.values()))
    for name, path in paths.items():
        log.info("wrote %s: %s", name, path)
    return 0


def cmd_run(args):
    from cohypo.pipeline import run_pipeline

    config_path = _check_exists(_resolve(args, args.config))
    status = run_pipeline(config_path, force=args.force, threads=args.threads)
    for stage, what in status.items():
        log.info("%s: %s", stage, what)
    return 0


if __name__ == "__main__":
    sys.exit(main())
