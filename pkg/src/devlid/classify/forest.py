"""Random forest of Gini decision trees, grown on bootstrap samples."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
import scipy.sparse as sp

from .base import STREAM_FOREST, ClassifyError, Model, TrainConfig, TrainingSet, child_rng, dense_chunks, parallel_map

LEAF = -1


@dataclass(eq=False)
class Tree:
    """Flat node arrays in preorder; ``feature[i] == LEAF`` marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    label: np.ndarray

    def apply(self, Xd: np.ndarray) -> np.ndarray:
        node = np.zeros(Xd.shape[0], dtype=np.int64)
        rows = np.arange(Xd.shape[0])
        while True:
            feat = self.feature[node]
            inner = feat != LEAF
            if not inner.any():
                return node
            r, nd = rows[inner], node[inner]
            go_left = Xd[r, feat[inner]] <= self.threshold[nd]
            node[inner] = np.where(go_left, self.left[nd], self.right[nd])

    def predict_dense(self, Xd: np.ndarray) -> np.ndarray:
        return self.label[self.apply(Xd)]

    @property
    def n_nodes(self) -> int:
        return len(self.feature)


def gini(counts: np.ndarray) -> np.ndarray:
    n = counts.sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        p = counts / np.where(n > 0, n, 1)[..., None]
    return 1.0 - np.sum(p * p, axis=-1)


def best_split_on_column(
    values: np.ndarray, y: np.ndarray, n_classes: int, min_leaf: int
) -> tuple[float, float] | None:
    """Lowest weighted child impurity over midpoint thresholds of one column.

    Returns ``(weighted_gini, threshold)`` or None when no split leaves both
    children with ``min_leaf`` samples.
    """
    n = len(values)
    order = np.argsort(values, kind="stable")
    vs = values[order]
    left = np.cumsum(np.eye(n_classes, dtype=np.int64)[y[order]], axis=0)[:-1]
    n_left = np.arange(1, n)
    ok = (vs[:-1] < vs[1:]) & (n_left >= min_leaf) & (n - n_left >= min_leaf)
    if not ok.any():
        return None
    pos = np.flatnonzero(ok)
    lc = left[pos]
    rc = left[-1] + np.eye(n_classes, dtype=np.int64)[y[order[-1]]] - lc
    nl = n_left[pos]
    weighted = (nl * gini(lc) + (n - nl) * gini(rc)) / n
    best = int(np.argmin(weighted))
    i = pos[best]
    lo, hi = vs[i], vs[i + 1]
    thr = lo + (hi - lo) / 2.0
    if not lo <= thr < hi:
        thr = lo
    return float(weighted[best]), float(thr)


class _Grower:
    def __init__(self, Xc: sp.csc_matrix, Xr: sp.csr_matrix, y: np.ndarray, n_classes: int, cfg, rng):
        self.Xc, self.Xr, self.y = Xc, Xr, y
        self.n_classes = n_classes
        self.max_depth = cfg.max_depth
        self.min_leaf = max(1, cfg.min_leaf)
        self.rng = rng
        self.d = Xc.shape[1]
        self.m = max(1, math.ceil(math.sqrt(self.d)))

    def column(self, j: int, idx: np.ndarray) -> np.ndarray:
        lo, hi = self.Xc.indptr[j], self.Xc.indptr[j + 1]
        full = np.zeros(self.Xc.shape[0])
        full[self.Xc.indices[lo:hi]] = self.Xc.data[lo:hi]
        return full[idx]

    def find_split(self, idx: np.ndarray):
        """Scan sqrt(d)-sized batches of a random column order until one holds a valid split.

        Columns that are all-zero inside the node can never split it, so they
        are skipped without evaluation; they still occupy their batch slot.
        """
        perm = self.rng.permutation(self.d)
        active = np.zeros(self.d, dtype=bool)
        active[np.unique(self.Xr[idx].indices)] = True
        positions = np.flatnonzero(active[perm])
        yi = self.y[idx]
        best = None
        current_batch = None
        for pos in positions:
            batch = pos // self.m
            if best is not None and batch != current_batch:
                break
            current_batch = batch
            j = int(perm[pos])
            found = best_split_on_column(self.column(j, idx), yi, self.n_classes, self.min_leaf)
            if found is None:
                continue
            score, thr = found
            if best is None or score < best[0]:
                best = (score, j, thr)
        return best

    def grow(self, idx: np.ndarray) -> Tree:
        feature, threshold, left, right, label = [], [], [], [], []

        def new_node() -> int:
            for arr, v in ((feature, LEAF), (threshold, 0.0), (left, -1), (right, -1), (label, -1)):
                arr.append(v)
            return len(feature) - 1

        root = new_node()
        stack = [(root, idx, 0)]
        while stack:
            node, rows, depth = stack.pop()
            counts = np.bincount(self.y[rows], minlength=self.n_classes)
            label[node] = int(np.argmax(counts))
            if (
                np.count_nonzero(counts) <= 1
                or (self.max_depth is not None and depth >= self.max_depth)
                or len(rows) < 2 * self.min_leaf
            ):
                continue
            split = self.find_split(rows)
            if split is None:
                continue
            _, j, thr = split
            mask = self.column(j, rows) <= thr
            feature[node], threshold[node] = j, thr
            lnode, rnode = new_node(), new_node()
            left[node], right[node] = lnode, rnode
            # push right first so the left subtree is numbered first (preorder)
            stack.append((rnode, rows[~mask], depth + 1))
            stack.append((lnode, rows[mask], depth + 1))
        return Tree(
            np.array(feature, dtype=np.int64),
            np.array(threshold, dtype=float),
            np.array(left, dtype=np.int64),
            np.array(right, dtype=np.int64),
            np.array(label, dtype=np.int64),
        )


@dataclass(eq=False)
class RandomForest(Model):
    variant: ClassVar[str] = "forest"
    label_names: tuple[str, ...]
    dim: int
    trees: list[Tree]

    def _predict_matrix(self, X):
        out = np.empty(X.shape[0], dtype=np.int64)
        for start, Xd in dense_chunks(X):
            votes = np.zeros((Xd.shape[0], self.n_classes), dtype=np.int64)
            rows = np.arange(Xd.shape[0])
            for tree in self.trees:
                np.add.at(votes, (rows, tree.predict_dense(Xd)), 1)
            out[start : start + Xd.shape[0]] = np.argmax(votes, axis=1)
        return out


def train_forest(data: TrainingSet, cfg: TrainConfig | None = None) -> RandomForest:
    cfg = cfg or TrainConfig()
    data.require_classes(2)
    if cfg.forest.n_trees < 1:
        raise ClassifyError("forest needs n_trees >= 1")
    Xc = data.X.tocsc()

    def fit_one(t: int) -> Tree:
        rng = child_rng(cfg.seed, STREAM_FOREST, t)
        idx = rng.integers(0, data.X.shape[0], size=data.X.shape[0])
        return _Grower(Xc, data.X, data.y, data.n_classes, cfg.forest, rng).grow(idx)

    trees = parallel_map(fit_one, list(range(cfg.forest.n_trees)), cfg.n_jobs)
    return RandomForest(tuple(data.label_names), data.dimension, trees)
