"""Stratified splitting, confusion matrices, metrics, and the end-to-end experiment."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

import numpy as np

from .classify import Model, TrainConfig, TrainingSet, train
from .classify.base import STREAM_SPLIT, child_rng
from .corpus import CorpusError, LabeledCorpus
from .features import FeatureSpec, Vocabulary, fit_vocabulary, vectorize_many


class EvalError(ValueError):
    pass


def round_half_up(x: float, digits: int = 2) -> float:
    q = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP))


def fmt_half_up(x: float, digits: int) -> str:
    q = Decimal(1).scaleb(-digits)
    return str(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP))


def split(corpus: LabeledCorpus, test_fraction: float = 0.25, seed: int = 0) -> tuple[LabeledCorpus, LabeledCorpus]:
    """Stratified split: each label sends floor(count * fraction) docs (at least 1) to test."""
    if not 0.0 < test_fraction < 1.0:
        raise EvalError("test_fraction must lie strictly between 0 and 1")
    rng = child_rng(seed, STREAM_SPLIT)
    train_docs, test_docs = [], []
    for label, docs in corpus.by_label().items():
        if len(docs) < 2:
            raise EvalError(f"label {label!r} needs at least 2 documents to split, has {len(docs)}")
        n_test = max(1, int(len(docs) * test_fraction))
        order = rng.permutation(len(docs))
        test_docs.extend(docs[i] for i in order[:n_test])
        train_docs.extend(docs[i] for i in order[n_test:])
    return LabeledCorpus(train_docs, corpus.labels), LabeledCorpus(test_docs, corpus.labels)


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple[str, ...]
    counts: np.ndarray  # rows = actual, columns = predicted

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        L = len(self.labels)
        if counts.shape != (L, L):
            raise EvalError(f"counts must be {L}x{L}")
        if (counts < 0).any():
            raise EvalError("counts must be nonnegative")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def tp(self) -> np.ndarray:
        return np.diag(self.counts).copy()

    @property
    def fp(self) -> np.ndarray:
        return self.counts.sum(axis=0) - self.tp

    @property
    def fn(self) -> np.ndarray:
        return self.counts.sum(axis=1) - self.tp

    @property
    def tn(self) -> np.ndarray:
        return self.total - self.tp - self.fp - self.fn

    def to_tsv(self) -> str:
        lines = ["\t".join(("", *self.labels))]
        for lab, row in zip(self.labels, self.counts):
            lines.append("\t".join((lab, *map(str, row))))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "ConfusionMatrix":
        rows = [line.split("\t") for line in text.strip("\n").split("\n") if line.strip()]
        labels = tuple(rows[0][1:])
        if [r[0] for r in rows[1:]] != list(labels):
            raise EvalError("row labels must match column labels")
        return cls(labels, np.array([[int(v) for v in r[1:]] for r in rows[1:]]))


def confusion(golds: Sequence[str], preds: Sequence[str], labels: Sequence[str]) -> ConfusionMatrix:
    if len(golds) != len(preds):
        raise EvalError("golds and preds differ in length")
    index = {lab: i for i, lab in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for g, p in zip(golds, preds):
        try:
            counts[index[g], index[p]] += 1
        except KeyError as exc:
            raise EvalError(f"unknown label {exc.args[0]!r}") from None
    return ConfusionMatrix(tuple(labels), counts)


def _ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    num = num.astype(float)
    return np.divide(num, den, out=np.zeros_like(num), where=den > 0)


@dataclass(frozen=True)
class MetricsReport:
    labels: tuple[str, ...]
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    accuracy: float

    @property
    def macro(self) -> tuple[float, float, float]:
        return float(self.precision.mean()), float(self.recall.mean()), float(self.f1.mean())

    def per_class(self, label: str) -> tuple[float, float, float]:
        i = self.labels.index(label)
        return float(self.precision[i]), float(self.recall[i]), float(self.f1[i])

    def to_tsv(self, digits: int = 4) -> str:
        f = lambda x: fmt_half_up(x, digits)  # noqa: E731
        lines = ["class\tprecision\trecall\tf1"]
        for i, lab in enumerate(self.labels):
            lines.append(f"{lab}\t{f(self.precision[i])}\t{f(self.recall[i])}\t{f(self.f1[i])}")
        mp, mr, mf = self.macro
        lines.append(f"MACRO\t{f(mp)}\t{f(mr)}\t{f(mf)}")
        lines.append(f"accuracy={f(self.accuracy)}")
        return "\n".join(lines) + "\n"


def f1_score(precision: np.ndarray, recall: np.ndarray) -> np.ndarray:
    return _ratio(2.0 * precision * recall, precision + recall)


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Per-class precision/recall/F1, macro means, and accuracy = trace / total.

    A metric whose denominator is zero (a class never predicted, or absent
    from the gold labels) is reported as 0.
    """
    if cm.total == 0:
        raise EvalError("cannot score an empty confusion matrix")
    tp = cm.tp
    precision = _ratio(tp, tp + cm.fp)
    recall = _ratio(tp, tp + cm.fn)
    return MetricsReport(cm.labels, precision, recall, f1_score(precision, recall), float(tp.sum()) / cm.total)


def micro_average(cm: ConfusionMatrix) -> tuple[float, float, float]:
    """Pooled precision/recall/F1; for single-label data all three equal accuracy."""
    tp, fp, fn = cm.tp.sum(), cm.fp.sum(), cm.fn.sum()
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    return float(p), float(r), (2 * p * r / (p + r) if p + r else 0.0)


def weighted_average(report: MetricsReport, cm: ConfusionMatrix) -> tuple[float, float, float]:
    support = cm.counts.sum(axis=1) / cm.total
    return tuple(float(np.dot(support, m)) for m in (report.precision, report.recall, report.f1))


@dataclass
class ExperimentResult:
    model: Model
    vocabulary: Vocabulary
    confusion: ConfusionMatrix
    report: MetricsReport
    train: LabeledCorpus
    test: LabeledCorpus


def training_set(corpus: LabeledCorpus, vocab: Vocabulary) -> TrainingSet:
    y = [corpus.label_index(d.language) for d in corpus.documents]
    return TrainingSet(vectorize_many(corpus, vocab), y, corpus.labels)


def run_experiment(
    corpus: LabeledCorpus,
    spec: FeatureSpec,
    classifier: str,
    cfg: TrainConfig | None = None,
    test_fraction: float = 0.25,
    seed: int | None = None,
) -> ExperimentResult:
    """split -> fit vocabulary on train -> vectorize -> train -> predict test -> score."""
    cfg = cfg or TrainConfig()
    seed = cfg.seed if seed is None else seed
    if len(corpus.labels) < 2:
        raise CorpusError("need at least two languages to train a classifier")
    train_c, test_c = split(corpus, test_fraction, seed)
    vocab = fit_vocabulary(train_c, spec)
    model = train(classifier, training_set(train_c, vocab), cfg)
    preds = model.predict_batch(vectorize_many(test_c, vocab))
    golds = [d.language for d in test_c.documents]
    cm = confusion(golds, [corpus.labels[p] for p in preds], corpus.labels)
    return ExperimentResult(model, vocab, cm, metrics(cm), train_c, test_c)
