"""Self-describing text format for trained models.

Layout (one item per line)::

    DEVLID 1 <variant>
    spec <feature spec string>
    labels <count>
    <one label per line>
    dimension <d>
    vocabulary <n_terms> <n_docs>
    <tag>\\t<term>\\t<doc_freq>      (n_terms lines)
    param <name> <int|float|none> <value>
    array <name> <int|float> <dims...>
    <space-separated values, row-major>    (empty line for size 0)
    end

Floats are written with 17 significant digits so they round-trip exactly.
"""

from __future__ import annotations

from pathlib import Path
from typing import TextIO

import numpy as np
import scipy.sparse as sp

from ..features import FeatureSpec, Vocabulary
from .base import Model
from .forest import RandomForest, Tree
from .gnb import GaussianNb
from .knn import Knn
from .mlp import PARAM_NAMES, Mlp
from .svm import LinearSvm

MAGIC = "DEVLID"
VERSION = 1
VARIANTS = ("svm", "knn", "forest", "gnb", "mlp")


class ModelFormatError(ValueError):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _state(model: Model) -> tuple[dict, dict]:
    """Split a model into scalar params and named arrays."""
    if isinstance(model, LinearSvm):
        return {}, {"weights": model.weights}
    if isinstance(model, Knn):
        X = model.X.tocsr()
        return {"k": model.k}, {
            "indptr": X.indptr.astype(np.int64),
            "indices": X.indices.astype(np.int64),
            "data": X.data,
            "y": model.y,
        }
    if isinstance(model, RandomForest):
        sizes = np.array([t.n_nodes for t in model.trees], dtype=np.int64)
        cat = lambda attr: np.concatenate([getattr(t, attr) for t in model.trees])  # noqa: E731
        return {"n_trees": len(model.trees)}, {
            "tree_sizes": sizes,
            "feature": cat("feature"),
            "threshold": cat("threshold"),
            "left": cat("left"),
            "right": cat("right"),
            "label": cat("label"),
        }
    if isinstance(model, GaussianNb):
        return {"smoothing": model.smoothing}, {
            "class_priors": model.class_priors,
            "means": model.means,
            "variances": model.variances,
        }
    if isinstance(model, Mlp):
        return {"dropout_rate": model.dropout_rate}, {k: model.params[k] for k in PARAM_NAMES}
    raise ModelFormatError(f"cannot serialise {type(model).__name__}")


def _rebuild(variant: str, labels: tuple[str, ...], dim: int, params: dict, arrays: dict) -> Model:
    try:
        if variant == "svm":
            return LinearSvm(labels, dim, arrays["weights"])
        if variant == "knn":
            n = len(arrays["indptr"]) - 1
            X = sp.csr_matrix((arrays["data"], arrays["indices"], arrays["indptr"]), shape=(n, dim))
            return Knn(labels, dim, int(params["k"]), X, arrays["y"])
        if variant == "forest":
            bounds = np.concatenate([[0], np.cumsum(arrays["tree_sizes"])])
            trees = [
                Tree(*(arrays[a][lo:hi] for a in ("feature", "threshold", "left", "right", "label")))
                for lo, hi in zip(bounds[:-1], bounds[1:])
            ]
            return RandomForest(labels, dim, trees)
        if variant == "gnb":
            return GaussianNb(
                labels, dim, arrays["class_priors"], arrays["means"], arrays["variances"], float(params["smoothing"])
            )
        if variant == "mlp":
            return Mlp(labels, dim, {k: arrays[k] for k in PARAM_NAMES}, float(params["dropout_rate"]))
    except KeyError as exc:
        raise ModelFormatError(f"{variant} model is missing field {exc}") from None
    raise ModelFormatError(f"unknown model variant {variant!r}")


def dump(model: Model, vocab: Vocabulary, fh: TextIO) -> None:
    if len(vocab) != model.dim:
        raise ModelFormatError("vocabulary size does not match model dimension")
    params, arrays = _state(model)
    w = fh.write
    w(f"{MAGIC} {VERSION} {model.variant}\n")
    w(f"spec {vocab.spec}\n")
    w(f"labels {len(model.label_names)}\n")
    for lab in model.label_names:
        w(lab + "\n")
    w(f"dimension {model.dim}\n")
    w(f"vocabulary {len(vocab)} {vocab.n_docs}\n")
    for (tag, term), df in zip(vocab.terms, vocab.doc_freq):
        w(f"{tag}\t{term}\t{int(df)}\n")
    for name, value in params.items():
        if value is None:
            w(f"param {name} none -\n")
        elif isinstance(value, (int, np.integer)):
            w(f"param {name} int {int(value)}\n")
        else:
            w(f"param {name} float {_fmt(value)}\n")
    for name, arr in arrays.items():
        arr = np.asarray(arr)
        kind = "int" if np.issubdtype(arr.dtype, np.integer) else "float"
        w(f"array {name} {kind} {' '.join(map(str, arr.shape))}\n")
        flat = arr.ravel()
        w((" ".join(str(int(v)) for v in flat) if kind == "int" else " ".join(_fmt(v) for v in flat)) + "\n")
    w("end\n")


def save_model(path: str | Path, model: Model, vocab: Vocabulary) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        dump(model, vocab, fh)


def load(fh: TextIO) -> tuple[Model, Vocabulary]:
    lines = fh.read().split("\n")
    pos = 0

    def take() -> str:
        nonlocal pos
        if pos >= len(lines):
            raise ModelFormatError("unexpected end of model file")
        pos += 1
        return lines[pos - 1]

    def keyed(key: str) -> str:
        line = take()
        head, _, rest = line.partition(" ")
        if head != key:
            raise ModelFormatError(f"expected {key!r} line, got {line[:40]!r}")
        return rest

    header = take().split()
    if len(header) != 3 or header[0] != MAGIC:
        raise ModelFormatError("not a devlid model file")
    if header[1] != str(VERSION):
        raise ModelFormatError(f"unsupported model version {header[1]!r}")
    variant = header[2]
    if variant not in VARIANTS:
        raise ModelFormatError(f"unknown model variant {variant!r}")
    try:
        spec = FeatureSpec.parse(keyed("spec"))
        labels = tuple(take() for _ in range(int(keyed("labels"))))
        dim = int(keyed("dimension"))
        n_terms, n_docs = (int(v) for v in keyed("vocabulary").split())
        terms, dfs = [], []
        for _ in range(n_terms):
            tag, term, df = take().split("\t")
            terms.append((tag, term))
            dfs.append(int(df))
        params: dict = {}
        arrays: dict = {}
        while True:
            line = take()
            if line == "end":
                break
            parts = line.split(" ")
            if parts[0] == "param":
                _, name, kind, value = parts
                params[name] = None if kind == "none" else (int(value) if kind == "int" else float(value))
            elif parts[0] == "array":
                name, kind, shape = parts[1], parts[2], tuple(int(s) for s in parts[3:])
                raw = take()
                dtype = np.int64 if kind == "int" else float
                flat = np.array(raw.split(), dtype=dtype) if raw else np.zeros(0, dtype=dtype)
                arrays[name] = flat.reshape(shape)
            else:
                raise ModelFormatError(f"unexpected line {line[:40]!r}")
    except ModelFormatError:
        raise
    except (ValueError, TypeError) as exc:
        raise ModelFormatError(f"corrupt model file: {exc}") from None
    if n_terms != dim:
        raise ModelFormatError("vocabulary size does not match dimension")
    vocab = Vocabulary(spec, terms, dfs, n_docs)
    return _rebuild(variant, labels, dim, params, arrays), vocab


def load_model(path: str | Path) -> tuple[Model, Vocabulary]:
    try:
        with open(path, encoding="utf-8") as fh:
            return load(fh)
    except UnicodeDecodeError as exc:
        raise ModelFormatError(f"model file is not UTF-8: {exc}") from None
