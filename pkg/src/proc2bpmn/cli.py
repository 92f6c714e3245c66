"""Command-line surface: one binary with subcommands covering dataset
statistics, fold splitting, NER/RE training and evaluation, raw-text
extraction, pipeline scoring and graph rendering.

Exit codes: 0 success, 1 usage error, 2 data error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .bpmn import BpmnGraph, assemble_graph, close_gateways, emit_dot
from .config import CONFIG_KEYS, RunConfig, describe_keys, format_config, resolve_config
from .corpus import (
    Corpus,
    DataError,
    RelationType,
    corpus_stats,
    encode_iob,
    format_stats_table,
    kfold_split,
    merge_corpora,
)
from .corpus_io import FORMATS, load_corpus, save_corpus
from .dot import parse_dot
from .metrics import (
    aggregate_cv,
    classification_report,
    format_pipeline_table,
    format_report,
    ner_metrics,
    pipeline_metrics,
    pipeline_to_csv,
    report_to_json,
)
from .ner import (
    TrainConfig,
    featurize_corpus,
    load_embeddings,
    load_model,
    predict_mentions,
    save_model,
    tag_document,
    train_crf,
)
from .preprocess import PosTagger, build_tagger, document_from_text
from .relex import (
    CLASS_ORDER,
    LogisticRegressionClassifier,
    NegativeSampling,
    NoSampling,
    RandomOverSampling,
    apply_sampling,
    frames_for_corpus,
    predict_relations,
    train_relation_classifier,
    write_frames_csv,
)
from .resolve import cluster_mentions


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="proc2bpmn",
        description="Extract BPMN process models from annotated process descriptions.",
        epilog="configuration keys (flag > config file > default):\n" + describe_keys(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"proc2bpmn {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="config file (key = value lines); "
                       "PROC2BPMN_CONFIG is the fallback")
        p.add_argument("--seed", type=int, default=None)

    def corpus_opts(p):
        p.add_argument("--corpus", action="append", required=True,
                       help="corpus file; repeatable, files are concatenated")
        p.add_argument("--format", choices=FORMATS, default="native-jsonl")

    p = sub.add_parser("stats", help="mention-type statistics table")
    common(p)
    corpus_opts(p)

    p = sub.add_parser("split", help="write k-fold train/test corpus files")
    common(p)
    corpus_opts(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("train-ner", help="train the CRF sequence labeler")
    common(p)
    corpus_opts(p)
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--embeddings", help="optional word-vector table")
    p.add_argument("--l2", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--optimizer", choices=("lbfgs", "gd"), default=None)

    p = sub.add_parser("eval-ner", help="token-level scores of a CRF model")
    common(p)
    corpus_opts(p)
    p.add_argument("--model", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--exclude-o", action="store_true", default=None)
    p.add_argument("--json", help="also write the report as JSON")

    p = sub.add_parser("cv-ner", help="cross-validated CRF evaluation, or "
                       "train/transfer when --test-corpus is given")
    common(p)
    corpus_opts(p)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--test-corpus", action="append",
                   help="evaluate on this corpus instead of cross-validating")
    p.add_argument("--embeddings")
    p.add_argument("--l2", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--optimizer", choices=("lbfgs", "gd"), default=None)
    p.add_argument("--exclude-o", action="store_true", default=None)

    p = sub.add_parser("train-re", help="train the relation classifier")
    common(p)
    corpus_opts(p)
    p.add_argument("--out", required=True)
    p.add_argument("--sampling", choices=("none", "negative", "ros", "negative+ros"),
                   default="negative+ros")
    p.add_argument("--neg-rate", type=float, default=None)
    p.add_argument("--ros-multiplier", type=float, default=None)
    p.add_argument("--head", choices=("first", "last"), default=None)
    p.add_argument("--neighbors", choices=("mention", "pos"), default=None)
    p.add_argument("--export-frames", help="also write the feature frames as CSV")

    p = sub.add_parser("eval-re", help="cross-validated sampling-strategy comparison")
    common(p)
    corpus_opts(p)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--neg-rate", type=float, default=None)
    p.add_argument("--ros-multiplier", type=float, default=None)
    p.add_argument("--head", choices=("first", "last"), default=None)
    p.add_argument("--neighbors", choices=("mention", "pos"), default=None)

    p = sub.add_parser("extract", help="raw text -> BPMN graph (DOT + JSON)")
    common(p)
    p.add_argument("--text", required=True, help="plain-text process description")
    p.add_argument("--ner", required=True, help="trained CRF model file")
    p.add_argument("--re", required=True, help="trained relation model file")
    p.add_argument("--out", required=True, help="DOT file to write")
    p.add_argument("--json", help="also write the graph as JSON")
    p.add_argument("--embeddings")
    p.add_argument("--no-events", action="store_true")
    p.add_argument("--no-close-gateways", action="store_true")
    p.add_argument("--no-contract-conditions", action="store_true")

    p = sub.add_parser("eval-pipeline", help="score extracted elements and "
                       "relations against a gold corpus")
    common(p)
    corpus_opts(p)
    p.add_argument("--ner", required=True)
    p.add_argument("--re", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--relaxed-spans", action="store_true", default=None)
    p.add_argument("--csv", help="also write the score table as CSV")

    p = sub.add_parser("render", help="graph JSON -> DOT")
    common(p)
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    return parser


def _overrides(args) -> dict[str, object]:
    mapping = {
        "seed": "seed",
        "l2": "ner_l2",
        "max_iter": "ner_max_iter",
        "tol": "ner_tol",
        "optimizer": "ner_optimizer",
        "neg_rate": "relex_neg_rate",
        "ros_multiplier": "relex_ros_multiplier",
        "head": "relex_head",
        "neighbors": "relex_neighbors",
        "exclude_o": "eval_exclude_o",
        "relaxed_spans": "eval_relaxed_spans",
    }
    out = {}
    for attr, cfg_name in mapping.items():
        if hasattr(args, attr) and getattr(args, attr) is not None:
            out[cfg_name] = getattr(args, attr)
    if getattr(args, "no_events", False):
        out["bpmn_events"] = False
    if getattr(args, "no_close_gateways", False):
        out["bpmn_close_gateways"] = False
    if getattr(args, "no_contract_conditions", False):
        out["bpmn_contract_conditions"] = False
    return out


def _load_corpora(args) -> Corpus:
    parts = []
    for path in args.corpus:
        parts.append(load_corpus(path, args.format, provenance=Path(path).stem))
    return merge_corpora(*parts)


def _train_config(cfg: RunConfig) -> TrainConfig:
    return TrainConfig(l2=cfg.ner_l2, max_iter=cfg.ner_max_iter, tol=cfg.ner_tol,
                       optimizer=cfg.ner_optimizer, seed=cfg.seed)


def _pos_lexicon(corpus: Corpus) -> dict[str, str]:
    return dict(build_tagger(corpus).lexicon)


def _apply_sampling_recipe(frames, name: str, cfg: RunConfig):
    """Apply the named strategy; "negative+ros" composes the two the way the
    final pipeline model is trained."""
    if name in ("negative", "negative+ros"):
        frames = apply_sampling(frames, NegativeSampling(cfg.relex_neg_rate,
                                                         seed=cfg.seed))
    if name in ("ros", "negative+ros"):
        frames = apply_sampling(
            frames,
            RandomOverSampling(RelationType.FLOW, cfg.relex_ros_multiplier,
                               seed=cfg.seed),
        )
    return frames


def _embeddings(args):
    path = getattr(args, "embeddings", None)
    return load_embeddings(path) if path else None


def _cmd_stats(args, cfg):
    corpus = _load_corpora(args)
    print(format_stats_table(corpus_stats(corpus)))
    return 0


def _cmd_split(args, cfg):
    corpus = _load_corpora(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, (train, test) in enumerate(kfold_split(corpus, args.k, cfg.seed), start=1):
        save_corpus(train, out_dir / f"fold{i}.train.jsonl")
        save_corpus(test, out_dir / f"fold{i}.test.jsonl")
        print(f"fold {i}: {len(train.documents)} train / {len(test.documents)} test")
    return 0


def _cmd_train_ner(args, cfg):
    corpus = _load_corpora(args)
    data = featurize_corpus(corpus, _embeddings(args))
    model, result = train_crf(data, _train_config(cfg), pos_lexicon=_pos_lexicon(corpus))
    save_model(model, args.out)
    status = "converged" if result.converged else "max iterations reached"
    print(f"trained on {len(data)} sentences, {len(model.feature_vocab)} features; "
          f"NLL {result.final_nll:.2f} after {result.iterations} iterations ({status})")
    print(f"model written to {args.out}")
    return 0


def _gold_and_predicted(model, corpus, embeddings):
    gold, pred = [], []
    for doc in corpus:
        gold.extend(encode_iob(doc))
        pred.extend(tag_document(model, doc, embeddings))
    return gold, pred


def _cmd_eval_ner(args, cfg):
    model = load_model(args.model)
    corpus = _load_corpora(args)
    gold, pred = _gold_and_predicted(model, corpus, _embeddings(args))
    report = ner_metrics(gold, pred, exclude_o=cfg.eval_exclude_o)
    print(format_report(report))
    if args.json:
        Path(args.json).write_text(report_to_json(report), encoding="utf-8")
    return 0


def _cmd_cv_ner(args, cfg):
    corpus = _load_corpora(args)
    emb = _embeddings(args)
    tc = _train_config(cfg)
    if args.test_corpus:
        test_parts = [load_corpus(p, args.format, provenance=Path(p).stem)
                      for p in args.test_corpus]
        test_corpus = merge_corpora(*test_parts)
        model, _ = train_crf(featurize_corpus(corpus, emb), tc)
        gold, pred = _gold_and_predicted(model, test_corpus, emb)
        report = ner_metrics(gold, pred, exclude_o=cfg.eval_exclude_o)
        print(f"train: {len(corpus.documents)} documents; "
              f"test: {len(test_corpus.documents)} documents")
        print(format_report(report))
        return 0
    reports = []
    for i, (train, test) in enumerate(kfold_split(corpus, args.k, cfg.seed), start=1):
        model, _ = train_crf(featurize_corpus(train, emb), tc)
        gold, pred = _gold_and_predicted(model, test, emb)
        report = ner_metrics(gold, pred, exclude_o=cfg.eval_exclude_o)
        reports.append(report)
        print(f"fold {i}: weighted F1 {report.weighted.f1:.4f}")
    agg = aggregate_cv(reports)
    print(f"\naggregate over {args.k} folds:")
    print(format_report(agg))
    return 0


def _cmd_train_re(args, cfg):
    corpus = _load_corpora(args)
    frames = frames_for_corpus(corpus, head=cfg.relex_head, neighbors=cfg.relex_neighbors)
    frames = _apply_sampling_recipe(frames, args.sampling, cfg)
    if args.export_frames:
        write_frames_csv(frames, args.export_frames)
    clf = train_relation_classifier(frames, seed=cfg.seed)
    clf.save(args.out)
    print(f"trained on {len(frames)} frames (sampling: {args.sampling})")
    print("held-out report:")
    print(format_report(clf.training_report))
    print(f"model written to {args.out}")
    return 0


def _cmd_eval_re(args, cfg):
    corpus = _load_corpora(args)
    strategies = [("none", NoSampling()),
                  ("negative", NegativeSampling(cfg.relex_neg_rate, seed=cfg.seed)),
                  ("ros", RandomOverSampling(RelationType.FLOW,
                                             cfg.relex_ros_multiplier, seed=cfg.seed))]
    classes = [c.value for c in CLASS_ORDER]
    results = {}
    for name, strategy in strategies:
        reports = []
        for train, test in kfold_split(corpus, args.k, cfg.seed):
            train_frames = apply_sampling(
                frames_for_corpus(train, cfg.relex_head, cfg.relex_neighbors), strategy
            )
            clf = LogisticRegressionClassifier(seed=cfg.seed).fit(train_frames)
            test_frames = frames_for_corpus(test, cfg.relex_head, cfg.relex_neighbors)
            gold = [f.label.value for f in test_frames]
            pred = [t.value for t in clf.predict_many(test_frames)]
            reports.append(classification_report(gold, pred, classes))
        results[name] = aggregate_cv(reports)
    header = ["relation"] + [name for name, _ in strategies]
    rows = [header]
    for cls in classes:
        rows.append([cls] + [f"{results[name].classes[cls].f1:.3f}"
                             for name, _ in strategies])
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    print(f"per-class F1 across sampling strategies ({args.k}-fold CV):")
    for row in rows:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return 0


def _extract_graph(doc, ner_model, re_model, cfg, embeddings=None):
    mentions = predict_mentions(ner_model, doc, embeddings)
    relations = predict_relations(re_model, doc, mentions,
                                  head=cfg.relex_head, neighbors=cfg.relex_neighbors)
    clusters = cluster_mentions(
        doc, mentions,
        exact_match=cfg.resolve_exact_match,
        head_match=cfg.resolve_head_match,
        pronouns=cfg.resolve_pronouns,
    )
    graph = assemble_graph(
        mentions, relations, clusters,
        events=cfg.bpmn_events,
        contract_conditions=cfg.bpmn_contract_conditions,
    )
    if cfg.bpmn_close_gateways:
        graph = close_gateways(graph)
    return graph


def _cmd_extract(args, cfg):
    text = Path(args.text).read_text(encoding="utf-8")
    ner_model = load_model(args.ner)
    re_model = LogisticRegressionClassifier.load(args.re)
    tagger = (PosTagger(ner_model.pos_lexicon) if ner_model.pos_lexicon
              else build_tagger(None))
    doc = document_from_text(Path(args.text).stem, text, tagger,
                             cfg.preprocess_strip_chars)
    graph = _extract_graph(doc, ner_model, re_model, cfg, _embeddings(args))
    dot_text = emit_dot(graph)
    parse_dot(dot_text)  # sanity: emitted text must satisfy the DOT grammar
    Path(args.out).write_text(dot_text, encoding="utf-8")
    if args.json:
        Path(args.json).write_text(graph.to_json(), encoding="utf-8")
    for line in graph.diagnostics:
        print(f"diagnostic: {line}", file=sys.stderr)
    print(f"graph with {len(graph.nodes)} nodes / {len(graph.edges)} edges "
          f"written to {args.out}")
    return 0


def _cmd_eval_pipeline(args, cfg):
    corpus = _load_corpora(args)
    ner_model = load_model(args.ner)
    re_model = LogisticRegressionClassifier.load(args.re)
    emb = _embeddings(args)
    pairs = []
    for doc in corpus:
        mentions = predict_mentions(ner_model, doc, emb)
        relations = predict_relations(re_model, doc, mentions,
                                      head=cfg.relex_head,
                                      neighbors=cfg.relex_neighbors)
        pairs.append((doc, mentions, relations))
    score = pipeline_metrics(pairs, relaxed_spans=cfg.eval_relaxed_spans)
    print(format_pipeline_table(score))
    if args.csv:
        Path(args.csv).write_text(pipeline_to_csv(score), encoding="utf-8")
    return 0


def _cmd_render(args, cfg):
    graph = BpmnGraph.from_json(Path(args.graph).read_text(encoding="utf-8"))
    dot_text = emit_dot(graph)
    parse_dot(dot_text)
    Path(args.out).write_text(dot_text, encoding="utf-8")
    print(f"DOT written to {args.out}")
    return 0


_COMMANDS = {
    "stats": _cmd_stats,
    "split": _cmd_split,
    "train-ner": _cmd_train_ner,
    "eval-ner": _cmd_eval_ner,
    "cv-ner": _cmd_cv_ner,
    "train-re": _cmd_train_re,
    "eval-re": _cmd_eval_re,
    "extract": _cmd_extract,
    "eval-pipeline": _cmd_eval_pipeline,
    "render": _cmd_render,
}


def run_command(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help()
        return 1
    try:
        cfg = resolve_config(args.config, _overrides(args))
        print("resolved config:", file=sys.stderr)
        for line in format_config(cfg).splitlines():
            print(f"  {line}", file=sys.stderr)
        return _COMMANDS[args.command](args, cfg)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
