"""Linear SVM trained in the primal with stochastic subgradient steps (Pegasos)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
import scipy.sparse as sp

from .base import STREAM_SVM, ClassifyError, Model, TrainConfig, TrainingSet, child_rng, parallel_map


@dataclass(eq=False)
class LinearSvm(Model):
    variant: ClassVar[str] = "svm"
    label_names: tuple[str, ...]
    dim: int
    weights: np.ndarray  # (C, d + 1); last column is the bias
    objectives: np.ndarray | None = field(default=None, repr=False, compare=False)

    def scores(self, X: sp.csr_matrix) -> np.ndarray:
        return np.asarray(X @ self.weights[:, :-1].T) + self.weights[:, -1]

    def _predict_matrix(self, X):
        # argmax returns the first maximum, i.e. the lowest class index on ties
        return np.argmax(self.scores(X), axis=1)


def _with_bias(X: sp.csr_matrix) -> sp.csr_matrix:
    ones = sp.csr_matrix(np.ones((X.shape[0], 1)))
    return sp.hstack([X, ones], format="csr")


def hinge_objective(w: np.ndarray, Xb: sp.csr_matrix, y: np.ndarray, lam: float) -> float:
    margins = y * np.asarray(Xb @ w).ravel()
    return 0.5 * lam * float(w @ w) + float(np.mean(np.maximum(0.0, 1.0 - margins)))


def pegasos(
    Xb: sp.csr_matrix, y: np.ndarray, lam: float, epochs: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Binary Pegasos on rows of ``Xb`` with labels in {-1, +1}.

    ``w`` is kept as ``scale * v`` so the shrink step is O(1).  Returns the
    final weights and the regularized objective after each epoch.
    """
    n, d = Xb.shape
    indptr, indices, data = Xb.indptr, Xb.indices, Xb.data
    v = np.zeros(d)
    scale = 1.0
    t = 0
    history = np.empty(epochs)
    for epoch in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            lo, hi = indptr[i], indptr[i + 1]
            cols, vals = indices[lo:hi], data[lo:hi]
            margin = y[i] * scale * float(v[cols] @ vals)
            shrink = 1.0 - eta * lam
            if shrink <= 0.0:
                v[:] = 0.0
                scale = 1.0
            else:
                scale *= shrink
            if margin < 1.0:
                v[cols] += (eta * y[i] / scale) * vals
            if scale < 1e-9:
                v *= scale
                scale = 1.0
        history[epoch] = hinge_objective(scale * v, Xb, y, lam)
    return scale * v, history


def train_svm(data: TrainingSet, cfg: TrainConfig | None = None) -> LinearSvm:
    """One-vs-rest linear SVM; class ``c`` uses generator ``(seed, svm, c)``."""
    cfg = cfg or TrainConfig()
    data.require_classes(2)
    if cfg.svm.lam <= 0 or cfg.svm.epochs < 1:
        raise ClassifyError("svm needs lam > 0 and epochs >= 1")
    Xb = _with_bias(data.X)

    def fit_one(c: int):
        y = np.where(data.y == c, 1.0, -1.0)
        return pegasos(Xb, y, cfg.svm.lam, cfg.svm.epochs, child_rng(cfg.seed, STREAM_SVM, c))

    results = parallel_map(fit_one, list(range(data.n_classes)), cfg.n_jobs)
    weights = np.vstack([w for w, _ in results])
    objectives = np.vstack([h for _, h in results])
    return LinearSvm(tuple(data.label_names), data.dimension, weights, objectives)
