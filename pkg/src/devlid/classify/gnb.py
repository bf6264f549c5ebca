from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .base import ClassifyError, Model, TrainConfig, TrainingSet, dense_chunks


@dataclass(eq=False)
class GaussianNb(Model):
    variant: ClassVar[str] = "gnb"
    label_names: tuple[str, ...]
    dim: int
    class_priors: np.ndarray  # (C,)
    means: np.ndarray  # (C, d)
    variances: np.ndarray  # (C, d)
    smoothing: float

    def joint_log_likelihood(self, Xd: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            log_prior = np.log(self.class_priors)
        norm = -0.5 * np.sum(np.log(2.0 * np.pi * self.variances), axis=1)
        out = np.empty((Xd.shape[0], self.n_classes))
        for c in range(self.n_classes):
            sq = (Xd - self.means[c]) ** 2 / self.variances[c]
            out[:, c] = log_prior[c] + norm[c] - 0.5 * sq.sum(axis=1)
        return out

    def _predict_matrix(self, X):
        out = np.empty(X.shape[0], dtype=np.int64)
        for start, Xd in dense_chunks(X, rows=64):
            out[start : start + len(Xd)] = np.argmax(self.joint_log_likelihood(Xd), axis=1)
        return out


def train_gnb(data: TrainingSet, cfg: TrainConfig | None = None) -> GaussianNb:
    """Per-class feature means and biased variances, floored at a shared epsilon.

    The floor is ``var_smoothing * max(global feature variance)``, which keeps
    features that are constant inside a class from producing infinite
    log-densities.  Classes without training samples get prior 0 and are never
    predicted.
    """
    cfg = cfg or TrainConfig()
    data.require_classes(2)
    n, d = data.X.shape
    C = data.n_classes
    counts = np.bincount(data.y, minlength=C)
    if np.any((counts > 0) & (counts < 2)):
        bad = [data.label_names[c] for c in np.flatnonzero((counts > 0) & (counts < 2))]
        raise ClassifyError(f"gaussian naive bayes needs >= 2 samples per class: {bad}")

    col_mean = np.asarray(data.X.mean(axis=0)).ravel()
    col_sq = np.asarray(data.X.multiply(data.X).mean(axis=0)).ravel()
    global_var = np.maximum(col_sq - col_mean**2, 0.0)
    eps = cfg.nb.var_smoothing * float(global_var.max()) if d else 0.0
    if eps <= 0.0:
        eps = cfg.nb.var_smoothing if cfg.nb.var_smoothing > 0 else np.finfo(float).tiny

    means = np.zeros((C, d))
    variances = np.full((C, d), eps)
    for c in np.flatnonzero(counts):
        Xc = data.X[data.y == c].toarray()
        means[c] = Xc.mean(axis=0)
        variances[c] = np.maximum(((Xc - means[c]) ** 2).mean(axis=0), eps)
    priors = counts / n
    return GaussianNb(tuple(data.label_names), d, priors, means, variances, eps)
