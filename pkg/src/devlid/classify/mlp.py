"""Fully connected network: input -> sigmoid -> sigmoid -> softmax.

Trained with plain mini-batch SGD on the mean cross-entropy, with inverted
dropout on both hidden layers during training.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
from scipy.special import expit

from .base import STREAM_MLP, ClassifyError, Model, TrainConfig, TrainingSet, as_matrix, child_rng

PARAM_NAMES = ("W1", "b1", "W2", "b2", "W3", "b3")


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def forward(params: dict, X, masks=None):
    """Return (probabilities, cache).  ``masks`` are pre-scaled dropout masks."""
    s1 = expit(X @ params["W1"] + params["b1"])
    a1 = s1 if masks is None else s1 * masks[0]
    s2 = expit(a1 @ params["W2"] + params["b2"])
    a2 = s2 if masks is None else s2 * masks[1]
    probs = softmax(a2 @ params["W3"] + params["b3"])
    return probs, (s1, a1, s2, a2)


def loss_and_grads(params: dict, X, y: np.ndarray, masks=None) -> tuple[float, dict]:
    """Mean cross-entropy over the batch and its gradient for every parameter."""
    n = X.shape[0]
    probs, (s1, a1, s2, a2) = forward(params, X, masks)
    rows = np.arange(n)
    loss = -float(np.mean(np.log(np.maximum(probs[rows, y], np.finfo(float).tiny))))

    d3 = probs.copy()
    d3[rows, y] -= 1.0
    d3 /= n
    grads = {"W3": a2.T @ d3, "b3": d3.sum(axis=0)}
    d2 = (d3 @ params["W3"].T) * s2 * (1.0 - s2)
    if masks is not None:
        d2 *= masks[1]
    grads["W2"] = a1.T @ d2
    grads["b2"] = d2.sum(axis=0)
    d1 = (d2 @ params["W2"].T) * s1 * (1.0 - s1)
    if masks is not None:
        d1 *= masks[0]
    grads["W1"] = np.asarray(X.T @ d1)
    grads["b1"] = d1.sum(axis=0)
    return loss, grads


@dataclass(eq=False)
class Mlp(Model):
    variant: ClassVar[str] = "mlp"
    label_names: tuple[str, ...]
    dim: int
    params: dict
    dropout_rate: float
    losses: np.ndarray | None = field(default=None, repr=False)

    @property
    def layer_sizes(self) -> tuple[int, int, int, int]:
        W1, W2, W3 = self.params["W1"], self.params["W2"], self.params["W3"]
        return (W1.shape[0], W1.shape[1], W2.shape[1], W3.shape[1])

    def predict_proba(self, xs) -> np.ndarray:
        return forward(self.params, as_matrix(xs))[0]

    def _predict_matrix(self, X):
        return np.argmax(forward(self.params, X)[0], axis=1)


def init_params(rng: np.random.Generator, sizes) -> dict:
    d, h1, h2, C = sizes
    return {
        "W1": glorot(rng, d, h1),
        "b1": np.zeros(h1),
        "W2": glorot(rng, h1, h2),
        "b2": np.zeros(h2),
        "W3": glorot(rng, h2, C),
        "b3": np.zeros(C),
    }


def train_mlp(data: TrainingSet, cfg: TrainConfig | None = None) -> Mlp:
    cfg = cfg or TrainConfig()
    data.require_classes(2)
    mc = cfg.mlp
    if not 0.0 <= mc.dropout_rate < 1.0:
        raise ClassifyError("dropout_rate must lie in [0, 1)")
    if mc.batch_size < 1 or mc.epochs < 1:
        raise ClassifyError("batch_size and epochs must be positive")
    rng = child_rng(cfg.seed, STREAM_MLP)
    h1, h2 = mc.hidden
    params = init_params(rng, (data.dimension, h1, h2, data.n_classes))
    keep = 1.0 - mc.dropout_rate
    n = data.X.shape[0]
    losses = np.empty(mc.epochs)
    for epoch in range(mc.epochs):
        order = rng.permutation(n)
        total = 0.0
        for b, start in enumerate(range(0, n, mc.batch_size)):
            batch = order[start : start + mc.batch_size]
            Xb, yb = data.X[batch], data.y[batch]
            masks = None
            if mc.dropout_rate > 0.0:
                masks = (
                    (rng.random((len(batch), h1)) < keep) / keep,
                    (rng.random((len(batch), h2)) < keep) / keep,
                )
            loss, grads = loss_and_grads(params, Xb, yb, masks)
            if not np.isfinite(loss):
                raise ClassifyError(f"non-finite loss at epoch {epoch}, batch {b}")
            for name in PARAM_NAMES:
                params[name] -= mc.learning_rate * grads[name]
            total += loss * len(batch)
        losses[epoch] = total / n
    return Mlp(tuple(data.label_names), data.dimension, params, mc.dropout_rate, losses)
