from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, ClassVar, Iterable, Sequence, TypeVar

import numpy as np
import scipy.sparse as sp

from ..features import FeatureVector, stack

T = TypeVar("T")
R = TypeVar("R")


class ClassifyError(ValueError):
    pass


# Stream identifiers keep each stochastic component on its own
# generator, derived from (seed, stream, index).
STREAM_SPLIT = 0
STREAM_SVM = 1
STREAM_FOREST = 2
STREAM_MLP = 3


def child_rng(seed: int, stream: int, index: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & 0xFFFF_FFFF_FFFF_FFFF, spawn_key=(stream, index))
    return np.random.default_rng(ss)


def parallel_map(fn: Callable[[T], R], items: Sequence[T], n_jobs: int = 1) -> list[R]:
    """Order-preserving map; every task owns its RNG so results never depend on n_jobs."""
    if n_jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, items))


@dataclass
class SvmConfig:
    lam: float = 1e-4
    epochs: int = 50


@dataclass
class KnnConfig:
    k: int = 3


@dataclass
class ForestConfig:
    n_trees: int = 100
    max_depth: int | None = None
    min_leaf: int = 1


@dataclass
class NbConfig:
    var_smoothing: float = 1e-9


@dataclass
class MlpConfig:
    hidden: tuple[int, int] = (256, 64)
    learning_rate: float = 0.05
    dropout_rate: float = 0.5
    batch_size: int = 256
    epochs: int = 200


_SECTIONS = ("svm", "knn", "forest", "nb", "mlp")


@dataclass
class TrainConfig:
    seed: int = 0
    n_jobs: int = 1
    svm: SvmConfig = field(default_factory=SvmConfig)
    knn: KnnConfig = field(default_factory=KnnConfig)
    forest: ForestConfig = field(default_factory=ForestConfig)
    nb: NbConfig = field(default_factory=NbConfig)
    mlp: MlpConfig = field(default_factory=MlpConfig)

    def override(self, assignments: Iterable[str], section: str | None = None) -> "TrainConfig":
        """Apply ``key=value`` strings.

        Keys are ``section.field`` (``knn.k=5``) or a bare field resolved
        against ``section`` (``k=5`` with section ``knn``).  ``seed`` and
        ``n_jobs`` are top-level.
        """
        cfg = dataclasses.replace(
            self, **{s: dataclasses.replace(getattr(self, s)) for s in _SECTIONS}
        )
        for item in assignments:
            key, sep, value = item.partition("=")
            if not sep:
                raise ClassifyError(f"override must look like key=value, got {item!r}")
            key = key.strip()
            if key in ("seed", "n_jobs"):
                setattr(cfg, key, int(value))
                continue
            sec, dot, name = key.rpartition(".")
            if not dot:
                sec = "nb" if section == "gnb" else section
            if sec not in _SECTIONS:
                raise ClassifyError(f"unknown hyperparameter {key!r}")
            target = getattr(cfg, sec)
            fields = {f.name: f for f in dataclasses.fields(target)}
            if name not in fields:
                raise ClassifyError(f"unknown hyperparameter {key!r}")
            setattr(target, name, _coerce(getattr(target, name), name, value.strip()))
        return cfg

    def as_pairs(self) -> list[tuple[str, str]]:
        out = [("seed", str(self.seed)), ("n_jobs", str(self.n_jobs))]
        for s in _SECTIONS:
            for f in dataclasses.fields(getattr(self, s)):
                v = getattr(getattr(self, s), f.name)
                if isinstance(v, tuple):
                    v = ",".join(map(str, v))
                out.append((f"{s}.{f.name}", repr(v) if isinstance(v, float) else str(v)))
        return out


def _coerce(current, name: str, value: str):
    if name == "hidden":
        parts = tuple(int(p) for p in value.replace("x", ",").split(","))
        if len(parts) != 2:
            raise ClassifyError("mlp.hidden needs exactly two sizes, e.g. 256,64")
        return parts
    if name == "max_depth":
        return None if value.lower() in ("none", "0", "") else int(value)
    if isinstance(current, bool):
        return value.lower() in ("1", "true", "yes")
    if isinstance(current, int):
        return int(value)
    if isinstance(current, float):
        return float(value)
    return value


@dataclass
class TrainingSet:
    X: sp.csr_matrix
    y: np.ndarray
    label_names: tuple[str, ...]

    def __post_init__(self):
        self.X = as_matrix(self.X)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.X.shape[0] != len(self.y):
            raise ClassifyError("vectors and labels differ in length")
        if len(self.y) < 2:
            raise ClassifyError("need at least two training vectors")
        if self.y.min() < 0 or self.y.max() >= len(self.label_names):
            raise ClassifyError("label index out of range")
        if not np.all(np.isfinite(self.X.data)):
            raise ClassifyError("training vectors contain NaN or infinity")

    @classmethod
    def from_vectors(cls, vectors: Sequence[FeatureVector], labels, label_names) -> "TrainingSet":
        return cls(stack(vectors), labels, tuple(label_names))

    @property
    def dimension(self) -> int:
        return self.X.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.label_names)

    def require_classes(self, minimum: int = 2) -> None:
        if len(np.unique(self.y)) < minimum:
            raise ClassifyError(f"need at least {minimum} classes in the training data")


def as_matrix(xs) -> sp.csr_matrix:
    if sp.issparse(xs):
        return sp.csr_matrix(xs, dtype=float)
    if isinstance(xs, FeatureVector):
        return stack([xs])
    if isinstance(xs, (list, tuple)) and xs and isinstance(xs[0], FeatureVector):
        return stack(list(xs))
    arr = np.asarray(xs, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    return sp.csr_matrix(arr)


class Model:
    """Common predict contract; subclasses implement ``_predict_matrix``."""

    variant: ClassVar[str]
    label_names: tuple[str, ...]
    dim: int

    def _predict_matrix(self, X: sp.csr_matrix) -> np.ndarray:
        raise NotImplementedError

    def predict_batch(self, xs) -> np.ndarray:
        if isinstance(xs, (list, tuple)) and not xs:
            return np.zeros(0, dtype=np.int64)
        X = as_matrix(xs)
        if X.shape[1] != self.dim:
            raise ClassifyError(f"dimension mismatch: model expects {self.dim}, got {X.shape[1]}")
        if X.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        return np.asarray(self._predict_matrix(X), dtype=np.int64)

    def predict(self, x) -> int:
        return int(self.predict_batch(as_matrix(x))[0])

    @property
    def n_classes(self) -> int:
        return len(self.label_names)


def predict(model: Model, x) -> int:
    return model.predict(x)


def predict_batch(model: Model, xs) -> np.ndarray:
    return model.predict_batch(xs)


def dense_chunks(X: sp.csr_matrix, rows: int = 128):
    for start in range(0, X.shape[0], rows):
        yield start, X[start : start + rows].toarray()
