"""Language identification for Devanagari-script poems.

Pipeline: sanitize -> extract features -> train a classifier -> score.
"""

from .corpus import CorpusStats, Document, LabeledCorpus, compute_stats, load_corpus
from .features import FeatureSpec, FeatureVector, Vocabulary, fit_vocabulary, vectorize, vectorize_many
from .script import CharClass, classify_char, phoneme_inventory, sanitize

__version__ = "0.1.0"

__all__ = [
    "CharClass",
    "CorpusStats",
    "Document",
    "FeatureSpec",
    "FeatureVector",
    "LabeledCorpus",
    "Vocabulary",
    "classify_char",
    "compute_stats",
    "fit_vocabulary",
    "load_corpus",
    "phoneme_inventory",
    "sanitize",
    "vectorize",
    "vectorize_many",
]
