"""Pairwise similarity measures and the language-by-language average matrices."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import AbstractSet

import numpy as np
import scipy.sparse as sp

from .corpus import CorpusError, LabeledCorpus
from .features import FeatureError, FeatureSpec, FeatureVector, Weighting, WordNgram, fit_vocabulary, vectorize_many


class Measure(enum.Enum):
    COSINE = "cosine"
    EUCLIDEAN = "euclidean"
    JACCARD = "jaccard"


def _check_dims(u: FeatureVector, v: FeatureVector) -> None:
    if u.dim != v.dim:
        raise FeatureError(f"dimension mismatch: {u.dim} vs {v.dim}")


def _sparse_dot(u: FeatureVector, v: FeatureVector) -> float:
    _, iu, iv = np.intersect1d(u.indices, v.indices, assume_unique=True, return_indices=True)
    return float(np.dot(u.values[iu], v.values[iv]))


def cosine(u: FeatureVector, v: FeatureVector) -> float:
    _check_dims(u, v)
    nu = math.sqrt(float(np.dot(u.values, u.values)))
    nv = math.sqrt(float(np.dot(v.values, v.values)))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    # clip guards against 1 + ulp for parallel vectors
    return min(1.0, max(-1.0, _sparse_dot(u, v) / (nu * nv)))


def euclidean(u: FeatureVector, v: FeatureVector) -> float:
    _check_dims(u, v)
    cols = np.union1d(u.indices, v.indices)
    a = np.zeros(len(cols))
    b = np.zeros(len(cols))
    a[np.searchsorted(cols, u.indices)] = u.values
    b[np.searchsorted(cols, v.indices)] = v.values
    return math.sqrt(float(np.sum((a - b) ** 2)))


def jaccard(a: AbstractSet, b: AbstractSet) -> float:
    union = len(a | b)
    if union == 0:
        return 1.0
    return len(a & b) / union


@dataclass(frozen=True)
class SimilarityMatrix:
    labels: tuple[str, ...]
    values: np.ndarray
    measure: Measure

    def to_tsv(self) -> str:
        digits = 2 if self.measure is Measure.EUCLIDEAN else 3
        lines = ["\t".join(("", *self.labels))]
        for lab, row in zip(self.labels, self.values):
            lines.append("\t".join((lab, *(f"{x:.{digits}f}" for x in row))))
        return "\n".join(lines) + "\n"


DEFAULT_SIMILARITY_SPEC = FeatureSpec((WordNgram(1),), weighting=Weighting.COUNTS, max_features=None)


def _pair_block(measure: Measure, A: sp.csr_matrix, B: sp.csr_matrix) -> np.ndarray:
    """All-pairs measure between rows of A and rows of B."""
    if measure is Measure.JACCARD:
        A = (A > 0).astype(float)
        B = (B > 0).astype(float)
        inter = (A @ B.T).toarray()
        sa = np.asarray(A.sum(axis=1)).ravel()
        sb = np.asarray(B.sum(axis=1)).ravel()
        union = sa[:, None] + sb[None, :] - inter
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(union > 0, inter / np.where(union > 0, union, 1), 1.0)
    dots = (A @ B.T).toarray()
    na = np.asarray(A.multiply(A).sum(axis=1)).ravel()
    nb = np.asarray(B.multiply(B).sum(axis=1)).ravel()
    if measure is Measure.COSINE:
        denom = np.sqrt(na)[:, None] * np.sqrt(nb)[None, :]
        safe = np.where(denom > 0, denom, 1.0)
        return np.clip(np.where(denom > 0, dots / safe, 0.0), 0.0, 1.0)
    sq = na[:, None] + nb[None, :] - 2.0 * dots
    return np.sqrt(np.maximum(sq, 0.0))


def language_pair_matrix(
    corpus: LabeledCorpus,
    measure: Measure | str,
    spec: FeatureSpec | None = None,
) -> SimilarityMatrix:
    """Mean of ``measure`` over every cross-language document pair.

    Vectors live in a vocabulary fitted on the whole corpus (word-unigram
    counts by default).  Jaccard treats each vector as the set of terms it
    contains.  Diagonals are fixed at 1 (similarities) or 0 (distance).
    """
    measure = Measure(measure)
    spec = spec or DEFAULT_SIMILARITY_SPEC
    groups = corpus.by_label()
    for lab, docs in groups.items():
        if not docs:
            raise CorpusError(f"label {lab!r} has no documents")
    vocab = fit_vocabulary(corpus, spec)
    X = vectorize_many(corpus, vocab)
    offsets = np.cumsum([0] + [len(groups[lab]) for lab in corpus.labels])
    blocks = [X[offsets[i] : offsets[i + 1]] for i in range(len(corpus.labels))]
    L = len(corpus.labels)
    diag = 0.0 if measure is Measure.EUCLIDEAN else 1.0
    out = np.full((L, L), diag)
    for i in range(L):
        for j in range(i + 1, L):
            out[i, j] = out[j, i] = float(_pair_block(measure, blocks[i], blocks[j]).mean())
    return SimilarityMatrix(tuple(corpus.labels), out, measure)
