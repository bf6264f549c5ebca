"""Command-line interface.

Exit status: 0 success, 1 internal error, 2 usage or input error,
3 unreadable/corrupt model file.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .classify import TRAINERS, ClassifyError, ModelFormatError, TrainConfig, load_model, save_model, train
from .corpus import CorpusError, compute_stats, load_corpus
from .evaluation import EvalError, fmt_half_up, run_experiment, training_set
from .features import FeatureError, FeatureSpec, Weighting, fit_vocabulary, vectorize
from .script import tokenize
from .similarity import DEFAULT_SIMILARITY_SPEC, Measure, language_pair_matrix

log = logging.getLogger("devlid")

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_MODEL = 0, 1, 2, 3
DEFAULT_FEATURES = "c3,w3"
MODEL_FILE = "model.devlid"
MANIFEST_FILE = "run.manifest"

# Feature grid of the character/word n-gram experiments.
NGRAM_GRID = [
    "c1", "c2", "c3", "c4", "c5",
    "c2,c3", "c2,c3,c4", "c1,c2,c3", "c2,c5", "c1,c5",
    "w1", "w1,w2", "w1,w2,w3", "w1,w2,w3,w4",
    "c3,w3", "c2,w5", "c4,w1", "c4,w3",
]  # fmt: skip


class UsageError(Exception):
    pass


def _spec(args) -> FeatureSpec:
    spec = FeatureSpec.parse(args.features)
    if getattr(args, "weighting", None):
        spec = FeatureSpec(spec.components, Weighting(args.weighting), spec.max_features, spec.min_doc_freq)
    return spec


def _config(args, classifier: str) -> TrainConfig:
    cfg = TrainConfig(seed=args.seed, n_jobs=args.jobs)
    return cfg.override(args.set or [], section=classifier)


def _write_manifest(out: Path, items: list[tuple[str, object]]) -> None:
    out.mkdir(parents=True, exist_ok=True)
    text = "".join(f"{k}={v}\n" for k, v in items)
    (out / MANIFEST_FILE).write_text(text, encoding="utf-8")


def _base_manifest(command: str, args, corpus, spec, classifier, cfg) -> list[tuple[str, object]]:
    items: list[tuple[str, object]] = [
        ("command", command),
        ("corpus_root", args.corpus),
        ("n_documents", len(corpus)),
        ("labels", ",".join(corpus.labels)),
        ("features", spec),
        ("classifier", classifier),
        ("test_fraction", repr(args.test_fraction)),
    ]
    return items + cfg.as_pairs()


def cmd_stats(args) -> int:
    corpus = load_corpus(args.corpus)
    sys.stdout.write(compute_stats(corpus).to_tsv())
    return EXIT_OK


def cmd_similarity(args) -> int:
    corpus = load_corpus(args.corpus)
    spec = _spec(args) if args.features else DEFAULT_SIMILARITY_SPEC
    sys.stdout.write(language_pair_matrix(corpus, Measure(args.measure), spec).to_tsv())
    return EXIT_OK


def cmd_train(args) -> int:
    corpus = load_corpus(args.corpus)
    spec = _spec(args)
    cfg = _config(args, args.classifier)
    vocab = fit_vocabulary(corpus, spec)
    model = train(args.classifier, training_set(corpus, vocab), cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_model(out / MODEL_FILE, model, vocab)
    items = _base_manifest("train", args, corpus, spec, args.classifier, cfg)
    items += [("vocabulary_size", len(vocab)), ("model", MODEL_FILE)]
    _write_manifest(out, items)
    print(out / MODEL_FILE)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    corpus = load_corpus(args.corpus)
    spec = _spec(args)
    cfg = _config(args, args.classifier)
    result = run_experiment(corpus, spec, args.classifier, cfg, args.test_fraction, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    metrics_tsv = result.report.to_tsv()
    (out / "metrics.tsv").write_text(metrics_tsv, encoding="utf-8")
    (out / "confusion.tsv").write_text(result.confusion.to_tsv(), encoding="utf-8")
    save_model(out / MODEL_FILE, result.model, result.vocabulary)
    items = _base_manifest("evaluate", args, corpus, spec, args.classifier, cfg)
    items += [
        ("n_train", len(result.train)),
        ("n_test", len(result.test)),
        ("vocabulary_size", len(result.vocabulary)),
        ("accuracy", fmt_half_up(result.report.accuracy, 4)),
        ("model", MODEL_FILE),
    ]
    _write_manifest(out, items)
    sys.stdout.write(metrics_tsv)
    return EXIT_OK


def _read_inputs(args) -> list[tuple[str, str]]:
    sources = args.inputs or ["-"]
    docs = []
    for src in sources:
        if src == "-":
            text = sys.stdin.buffer.read().decode("utf-8", errors="replace")
        else:
            try:
                text = Path(src).read_bytes().decode("utf-8", errors="replace")
            except OSError as exc:
                raise UsageError(f"cannot read {src}: {exc}") from None
        if args.lines:
            docs.extend((f"{src}:{i + 1}", line) for i, line in enumerate(text.splitlines()))
        else:
            docs.append((src, text))
    return docs


def cmd_predict(args) -> int:
    try:
        model, vocab = load_model(args.model)
    except OSError as exc:
        raise ModelFormatError(f"cannot open model {args.model}: {exc}") from None
    for name, text in _read_inputs(args):
        tokens = tokenize(text)
        if not tokens:
            print(f"warning: {name}: no Devanagari text after sanitization", file=sys.stderr)
            print("UNKNOWN")
            continue
        print(model.label_names[model.predict(vectorize(tokens, vocab))])
    return EXIT_OK


def cmd_sweep(args) -> int:
    corpus = load_corpus(args.corpus)
    specs = args.grid or NGRAM_GRID
    classifiers = [c.strip() for c in args.classifier.split(",") if c.strip()]
    for c in classifiers:
        if c not in TRAINERS:
            raise UsageError(f"unknown classifier {c!r}")
    # validates --set keys before any training starts
    sweep_cfg = _config(args, classifiers[0] if len(classifiers) == 1 else None)
    rows = []
    for text in specs:
        spec = FeatureSpec.parse(text)
        if args.weighting:
            spec = FeatureSpec(spec.components, Weighting(args.weighting), spec.max_features, spec.min_doc_freq)
        for c in classifiers:
            cfg = _config(args, c)
            result = run_experiment(corpus, spec, c, cfg, args.test_fraction, args.seed)
            log.info("%s %s accuracy=%.4f", spec, c, result.report.accuracy)
            rows.append((str(spec), c, result.report))
    rows.sort(key=lambda r: (-round(r[2].accuracy, 12), r[0], r[1]))
    lines = ["features\tclassifier\taccuracy\tmacro_precision\tmacro_recall\tmacro_f1"]
    for spec_s, c, rep in rows:
        mp, mr, mf = rep.macro
        lines.append("\t".join([spec_s, c, *(fmt_half_up(v, 4) for v in (rep.accuracy, mp, mr, mf))]))
    text = "\n".join(lines) + "\n"
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "leaderboard.tsv").write_text(text, encoding="utf-8")
        items = [
            ("command", "sweep"),
            ("corpus_root", args.corpus),
            ("n_documents", len(corpus)),
            ("classifiers", ",".join(classifiers)),
            ("grid", " | ".join(specs)),
            ("test_fraction", repr(args.test_fraction)),
        ]
        _write_manifest(out, items + sweep_cfg.as_pairs())
    sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="devlid", description="Devanagari poem language identification")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def corpus_arg(p):
        p.add_argument("--corpus", required=True, help="root directory: <root>/<language>/<poem>.txt")

    def exp_args(p, classifier_help="classifier"):
        p.add_argument("--features", default=DEFAULT_FEATURES, help="feature spec, e.g. c3,w3 or CT+WT")
        p.add_argument("--weighting", choices=[w.value for w in Weighting], help="override the spec's weighting")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--test-fraction", type=float, default=0.25)
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="hyperparameter override (repeatable)")
        p.add_argument("--jobs", type=int, default=1, help="worker threads (results do not depend on it)")

    p = sub.add_parser("stats", help="per-language word statistics (TSV)")
    corpus_arg(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("similarity", help="average language-pair similarity matrix (TSV)")
    corpus_arg(p)
    p.add_argument("--measure", required=True, choices=[m.value for m in Measure])
    p.add_argument("--features", default=None, help="feature spec (default: word unigram counts)")
    p.add_argument("--weighting", choices=[w.value for w in Weighting])
    p.set_defaults(func=cmd_similarity)

    for name, func, helptext in (
        ("train", cmd_train, "train on the whole corpus and save a model"),
        ("evaluate", cmd_evaluate, "split, train, and score on held-out poems"),
    ):
        p = sub.add_parser(name, help=helptext)
        corpus_arg(p)
        p.add_argument("--classifier", choices=sorted(TRAINERS), default="svm")
        p.add_argument("--out", required=True, help="output directory")
        exp_args(p)
        p.set_defaults(func=func)

    p = sub.add_parser("predict", help="label Devanagari text with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("inputs", nargs="*", help="text files, one document each ('-' or none: stdin)")
    p.add_argument("--lines", action="store_true", help="treat every input line as a separate document")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("sweep", help="evaluate a grid of feature specs; print a leaderboard")
    corpus_arg(p)
    p.add_argument("--classifier", default="svm", help="comma-separated classifier names")
    p.add_argument("--grid", action="append", metavar="SPEC", help="feature spec to include (repeatable)")
    p.add_argument("--out", default=None, help="directory for leaderboard.tsv and run.manifest")
    exp_args(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ModelFormatError as exc:
        print(f"devlid: model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (UsageError, CorpusError, FeatureError, ClassifyError, EvalError, ValueError) as exc:
        print(f"devlid: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"devlid: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
