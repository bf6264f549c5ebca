from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

import numpy as np
import scipy.sparse as sp

from .base import ClassifyError, Model, TrainConfig, TrainingSet


@dataclass(eq=False)
class Knn(Model):
    """k-nearest-neighbour vote under Euclidean distance.

    Distance ties go to the lower stored index; vote ties go to the tied
    label whose nearest member is closest.
    """

    variant: ClassVar[str] = "knn"
    label_names: tuple[str, ...]
    dim: int
    k: int
    X: sp.csr_matrix
    y: np.ndarray

    def __post_init__(self):
        if self.k < 1:
            raise ClassifyError("k must be >= 1")
        if self.X.shape[0] < self.k:
            raise ClassifyError(f"knn needs at least k={self.k} stored points")
        self._sqnorm = np.asarray(self.X.multiply(self.X).sum(axis=1)).ravel()

    def neighbours(self, x_row: sp.csr_matrix, approx: np.ndarray) -> np.ndarray:
        """Indices of the k nearest stored points, nearest first."""
        k = self.k
        kth = np.partition(approx, k - 1)[k - 1]
        # the expanded-norm distances carry rounding error; re-rank a
        # slightly wider candidate set with exact differences
        slack = 1e-9 * (1.0 + abs(kth))
        cand = np.flatnonzero(approx <= kth + slack)
        diff = self.X[cand].toarray() - x_row.toarray()
        exact = np.einsum("ij,ij->i", diff, diff)
        order = np.lexsort((cand, exact))
        return cand[order[:k]]

    def vote(self, nbrs: np.ndarray) -> int:
        labels = self.y[nbrs]
        counts = np.bincount(labels, minlength=self.n_classes)
        best = counts.max()
        for lab in labels:  # nearest first
            if counts[lab] == best:
                return int(lab)
        raise AssertionError("unreachable")

    def _predict_matrix(self, X):
        qnorm = np.asarray(X.multiply(X).sum(axis=1)).ravel()
        cross = (X @ self.X.T).toarray()
        approx = qnorm[:, None] + self._sqnorm[None, :] - 2.0 * cross
        out = np.empty(X.shape[0], dtype=np.int64)
        for i in range(X.shape[0]):
            out[i] = self.vote(self.neighbours(X[i], approx[i]))
        return out


def train_knn(data: TrainingSet, cfg: TrainConfig | None = None) -> Knn:
    cfg = cfg or TrainConfig()
    return Knn(tuple(data.label_names), data.dimension, cfg.knn.k, data.X.copy(), data.y.copy())


def knn_predict(model: Knn, x) -> int:
    return model.predict(x)
