"""Synthetic Devanagari corpora with controllable separability.

Each synthetic language owns a disjoint set of consonants; its 20-symbol
inventory is every (consonant, matra) akshara built from them.  Because
each character bigram contains one of the language's own consonants, the
languages are perfectly separable by character n-grams.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .corpus import Document, LabeledCorpus
from .script import phoneme_inventory

MATRAS = ("ा", "ि", "ी", "ु")


def akshara_inventories(n_languages: int, consonants_per_language: int = 5) -> list[list[str]]:
    consonants = phoneme_inventory().consonants
    need = n_languages * consonants_per_language
    if need > len(consonants):
        raise ValueError(f"only {len(consonants)} consonants available, {need} requested")
    inventories = []
    for i in range(n_languages):
        own = consonants[i * consonants_per_language : (i + 1) * consonants_per_language]
        inventories.append([c + m for c in own for m in MATRAS])
    return inventories


def synthetic_corpus(
    n_languages: int = 10,
    docs_per_language: int = 100,
    tokens_per_doc: int = 50,
    seed: int = 0,
    min_len: int = 1,
    max_len: int = 4,
) -> LabeledCorpus:
    """Generate documents of ``tokens_per_doc`` words, each 1-4 aksharas long."""
    rng = np.random.default_rng(seed)
    docs = []
    for i, inventory in enumerate(akshara_inventories(n_languages)):
        lang = f"lang{i:02d}"
        symbols = np.array(inventory)
        for j in range(docs_per_language):
            lengths = rng.integers(min_len, max_len + 1, size=tokens_per_doc)
            picks = symbols[rng.integers(0, len(symbols), size=int(lengths.sum()))]
            bounds = np.concatenate([[0], np.cumsum(lengths)])
            text = " ".join("".join(picks[a:b]) for a, b in zip(bounds[:-1], bounds[1:]))
            docs.append(Document.from_text(f"{lang}/doc{j:04d}.txt", lang, text))
    return LabeledCorpus(docs)


def write_corpus(corpus: LabeledCorpus, root: str | Path) -> Path:
    root = Path(root)
    for doc in corpus.documents:
        path = root / doc.id
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(doc.raw_text, encoding="utf-8")
    return root
