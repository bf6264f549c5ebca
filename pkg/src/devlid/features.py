"""Feature extraction: character/word n-grams, phoneme profiles, TF-IDF.

A :class:`FeatureSpec` is a set of *atoms* (``c3``, ``w1``, ``phm`` ...) plus
a weighting scheme.  Specs round-trip through a compact string form::

    c3,w3;weighting=relfreq;max_features=20000;min_df=1

Shorthand names are accepted as well (``CT+WT``, ``CB+CT+C4``).
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .script import CharClass, classify_char


class FeatureError(ValueError):
    pass


class Weighting(enum.Enum):
    COUNTS = "counts"
    RELFREQ = "relfreq"
    TFIDF = "tfidf"


class Profile(enum.Enum):
    PHONEMES = "phon"
    INDEPENDENT_VOWELS = "vowel"
    CONSONANTS = "cons"
    MATRAS = "matra"
    PHONEMES_PLUS_MATRAS = "phm"


_PROFILE_CLASSES = {
    Profile.PHONEMES: {CharClass.INDEPENDENT_VOWEL, CharClass.CONSONANT},
    Profile.INDEPENDENT_VOWELS: {CharClass.INDEPENDENT_VOWEL},
    Profile.CONSONANTS: {CharClass.CONSONANT},
    Profile.MATRAS: {CharClass.MATRA, CharClass.SIGN},
    Profile.PHONEMES_PLUS_MATRAS: {
        CharClass.INDEPENDENT_VOWEL,
        CharClass.CONSONANT,
        CharClass.MATRA,
        CharClass.SIGN,
    },
}

MAX_N = 5


@dataclass(frozen=True)
class Atom:
    kind: str  # "char" | "word" | "profile"
    n: int = 0
    profile: Profile | None = None

    @property
    def tag(self) -> str:
        if self.kind == "char":
            return f"c{self.n}"
        if self.kind == "word":
            return f"w{self.n}"
        return self.profile.value

    @property
    def order(self) -> tuple[int, int]:
        if self.kind == "char":
            return (0, self.n)
        if self.kind == "word":
            return (1, self.n)
        return (2, list(Profile).index(self.profile))

    def extract(self, tokens: Sequence[str]) -> list[str]:
        if self.kind == "char":
            return char_ngrams(tokens, self.n)
        if self.kind == "word":
            return word_ngrams(tokens, self.n)
        return phoneme_profile(tokens, self.profile)


def CharNgram(n: int) -> Atom:
    _check_n(n)
    return Atom("char", n=n)


def WordNgram(n: int) -> Atom:
    _check_n(n)
    return Atom("word", n=n)


def PhonemeProfile(profile: Profile) -> Atom:
    return Atom("profile", profile=profile)


def _check_n(n: int) -> None:
    if not isinstance(n, int) or not 1 <= n <= MAX_N:
        raise FeatureError(f"n-gram order must be in 1..{MAX_N}, got {n!r}")


_SHORT_SUFFIX = {"U": 1, "B": 2, "T": 3, "4": 4, "5": 5}


def parse_atom(text: str) -> Atom:
    t = text.strip()
    low = t.lower()
    for p in Profile:
        if low == p.value:
            return PhonemeProfile(p)
    if len(t) == 2 and t[0].lower() in "cw":
        kind = t[0].lower()
        suffix = t[1].upper()
        if suffix.isdigit():
            n = int(suffix)
        elif suffix in _SHORT_SUFFIX:
            n = _SHORT_SUFFIX[suffix]
        else:
            raise FeatureError(f"unknown feature atom {text!r}")
        return CharNgram(n) if kind == "c" else WordNgram(n)
    raise FeatureError(f"unknown feature atom {text!r}")


@dataclass(frozen=True)
class FeatureSpec:
    components: tuple[Atom, ...]
    weighting: Weighting = Weighting.RELFREQ
    max_features: int | None = 20_000
    min_doc_freq: int = 1

    def __post_init__(self):
        if not self.components:
            raise FeatureError("feature spec needs at least one atom")
        if len(set(self.components)) != len(self.components):
            raise FeatureError("feature atoms must be distinct")
        object.__setattr__(self, "components", tuple(sorted(self.components, key=lambda a: a.order)))
        if self.min_doc_freq < 1:
            raise FeatureError("min_doc_freq must be >= 1")
        if self.max_features is not None and self.max_features < 1:
            raise FeatureError("max_features must be positive (or None)")

    @classmethod
    def parse(cls, text: str) -> "FeatureSpec":
        head, *opts = [part.strip() for part in text.split(";")]
        atoms = [parse_atom(a) for a in head.replace("+", ",").split(",") if a.strip()]
        kwargs: dict = {}
        for opt in opts:
            if not opt:
                continue
            key, sep, value = opt.partition("=")
            if not sep:
                raise FeatureError(f"malformed spec option {opt!r}")
            key, value = key.strip(), value.strip()
            if key == "weighting":
                try:
                    kwargs["weighting"] = Weighting(value.lower())
                except ValueError:
                    raise FeatureError(f"unknown weighting {value!r}") from None
            elif key == "max_features":
                kwargs["max_features"] = None if value.lower() in ("none", "0") else int(value)
            elif key in ("min_df", "min_doc_freq"):
                kwargs["min_doc_freq"] = int(value)
            else:
                raise FeatureError(f"unknown spec option {key!r}")
        if not atoms:
            raise FeatureError(f"no feature atoms in {text!r}")
        return cls(tuple(atoms), **kwargs)

    def __str__(self) -> str:
        mf = "none" if self.max_features is None else str(self.max_features)
        atoms = ",".join(a.tag for a in self.components)
        return f"{atoms};weighting={self.weighting.value};max_features={mf};min_df={self.min_doc_freq}"


def char_ngrams(tokens: Sequence[str], n: int) -> list[str]:
    """All length-``n`` code-point windows, never crossing word boundaries."""
    if n < 1:
        raise FeatureError("n must be >= 1")
    return [tok[i : i + n] for tok in tokens for i in range(len(tok) - n + 1)]


def word_ngrams(tokens: Sequence[str], n: int) -> list[str]:
    if n < 1:
        raise FeatureError("n must be >= 1")
    return [" ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def phoneme_profile(tokens: Sequence[str], profile: Profile) -> list[str]:
    wanted = _PROFILE_CLASSES[profile]
    return [ch for tok in tokens for ch in tok if classify_char(ch) in wanted]


def extract_terms(tokens: Sequence[str], spec: FeatureSpec) -> Counter:
    """Count ``(atom_tag, term)`` occurrences for every atom in the spec."""
    counts: Counter = Counter()
    for atom in spec.components:
        tag = atom.tag
        counts.update((tag, term) for term in atom.extract(tokens))
    return counts


@dataclass(frozen=True)
class FeatureVector:
    indices: np.ndarray
    values: np.ndarray
    dim: int

    def __post_init__(self):
        if len(self.indices) and (self.indices.min() < 0 or self.indices.max() >= self.dim):
            raise FeatureError("column index out of range")

    @classmethod
    def from_dense(cls, x: Sequence[float]) -> "FeatureVector":
        x = np.asarray(x, dtype=float)
        idx = np.flatnonzero(x)
        return cls(idx, x[idx], len(x))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out

    def as_dict(self) -> dict[int, float]:
        return {int(i): float(v) for i, v in zip(self.indices, self.values)}


def stack(vectors: Sequence[FeatureVector], dim: int | None = None) -> sp.csr_matrix:
    if dim is None:
        if not vectors:
            raise FeatureError("cannot infer dimension of an empty batch")
        dim = vectors[0].dim
    if any(v.dim != dim for v in vectors):
        raise FeatureError("feature vectors have mismatched dimensions")
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(v.indices) for v in vectors])
    if vectors:
        indices = np.concatenate([v.indices for v in vectors]).astype(np.int64)
        data = np.concatenate([v.values for v in vectors]).astype(float)
    else:
        indices = np.zeros(0, dtype=np.int64)
        data = np.zeros(0)
    return sp.csr_matrix((data, indices, indptr), shape=(len(vectors), dim))


@dataclass
class Vocabulary:
    spec: FeatureSpec
    terms: list[tuple[str, str]]
    doc_freq: np.ndarray
    n_docs: int
    index: dict[tuple[str, str], int] = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {t: i for i, t in enumerate(self.terms)}
        self.doc_freq = np.asarray(self.doc_freq, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def idf(self) -> np.ndarray:
        return np.log((1.0 + self.n_docs) / (1.0 + self.doc_freq)) + 1.0


def fit_vocabulary(docs: Iterable, spec: FeatureSpec) -> Vocabulary:
    """Collect the term space from training documents.

    ``docs`` may be a corpus, documents, or raw token sequences.
    """
    token_lists = [_tokens_of(d) for d in _documents_of(docs)]
    if not token_lists:
        raise FeatureError("cannot fit a vocabulary on zero documents")
    df: Counter = Counter()
    total: Counter = Counter()
    for tokens in token_lists:
        counts = extract_terms(tokens, spec)
        total.update(counts)
        df.update(counts.keys())
    tag_rank = {a.tag: i for i, a in enumerate(spec.components)}
    kept = [t for t, f in df.items() if f >= spec.min_doc_freq]
    if spec.max_features is not None and len(kept) > spec.max_features:
        kept.sort(key=lambda t: (-total[t], tag_rank[t[0]], t[1]))
        kept = kept[: spec.max_features]
    kept.sort(key=lambda t: (tag_rank[t[0]], t[1]))
    if not kept:
        raise FeatureError("vocabulary is empty after pruning")
    return Vocabulary(spec, kept, [df[t] for t in kept], len(token_lists))


def vectorize(doc, vocab: Vocabulary) -> FeatureVector:
    counts = extract_terms(_tokens_of(doc), vocab.spec)
    pairs = sorted((vocab.index[t], c) for t, c in counts.items() if t in vocab.index)
    idx = np.array([p[0] for p in pairs], dtype=np.int64)
    val = np.array([p[1] for p in pairs], dtype=float)
    weighting = vocab.spec.weighting
    if weighting is Weighting.RELFREQ and len(val):
        val = val / val.sum()
    elif weighting is Weighting.TFIDF and len(val):
        val = val * vocab.idf[idx]
        val = val / math.sqrt(float(np.dot(val, val)))
    return FeatureVector(idx, val, len(vocab))


def vectorize_many(docs: Iterable, vocab: Vocabulary) -> sp.csr_matrix:
    return stack([vectorize(d, vocab) for d in _documents_of(docs)], dim=len(vocab))


def _documents_of(docs):
    return getattr(docs, "documents", docs)


def _tokens_of(doc) -> Sequence[str]:
    tokens = getattr(doc, "tokens", doc)
    if isinstance(tokens, str):
        raise FeatureError("expected a token sequence, got a bare string")
    return tokens
