"""Loading labeled poem corpora from a directory tree and Table-2 style stats."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .script import sanitize

log = logging.getLogger(__name__)


class CorpusError(Exception):
    """Fatal problem with a corpus (missing root, no documents, ...)."""


@dataclass(frozen=True)
class Document:
    id: str
    language: str
    raw_text: str
    tokens: tuple[str, ...]

    @classmethod
    def from_text(cls, id: str, language: str, text: str) -> "Document":
        return cls(id=id, language=language, raw_text=text, tokens=tuple(sanitize(text).split()))


@dataclass
class LabeledCorpus:
    documents: list[Document]
    labels: tuple[str, ...] = ()
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.documents = sorted(self.documents, key=lambda d: (d.language, d.id))
        present = sorted({d.language for d in self.documents})
        if not self.labels:
            self.labels = tuple(present)
        else:
            self.labels = tuple(sorted(set(self.labels)))
            missing = set(present) - set(self.labels)
            if missing:
                raise CorpusError(f"documents carry unknown labels: {sorted(missing)}")

    def __len__(self) -> int:
        return len(self.documents)

    def by_label(self) -> dict[str, list[Document]]:
        groups: dict[str, list[Document]] = {lab: [] for lab in self.labels}
        for doc in self.documents:
            groups[doc.language].append(doc)
        return groups

    def label_index(self, label: str) -> int:
        return self.labels.index(label)


def make_corpus(docs: Iterable[Document], labels: Iterable[str] = ()) -> LabeledCorpus:
    kept = [d for d in docs if d.tokens]
    if not kept:
        raise CorpusError("no documents")
    return LabeledCorpus(kept, tuple(labels))


def load_corpus(root: str | Path) -> LabeledCorpus:
    """Read ``<root>/<language>/<file>`` poems; one UTF-8 file per poem.

    Files that are not valid UTF-8, or that sanitize to nothing, are skipped
    and recorded in ``corpus.warnings``.
    """
    root = Path(root)
    if not root.is_dir():
        raise CorpusError(f"corpus root is not a readable directory: {root}")
    docs: list[Document] = []
    warnings: list[str] = []
    try:
        lang_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    except OSError as exc:
        raise CorpusError(f"cannot list {root}: {exc}") from exc
    for lang_dir in lang_dirs:
        for path in sorted(p for p in lang_dir.rglob("*") if p.is_file()):
            rel = path.relative_to(root).as_posix()
            try:
                text = path.read_bytes().decode("utf-8")
            except UnicodeDecodeError:
                warnings.append(f"{rel}: invalid UTF-8, skipped")
                continue
            except OSError as exc:
                warnings.append(f"{rel}: unreadable ({exc}), skipped")
                continue
            doc = Document.from_text(rel, lang_dir.name, text)
            if not doc.tokens:
                warnings.append(f"{rel}: empty after sanitization, skipped")
                continue
            docs.append(doc)
    for w in warnings:
        log.warning(w)
    if not docs:
        raise CorpusError(f"no documents under {root}")
    corpus = LabeledCorpus(docs)
    corpus.warnings = warnings
    return corpus


@dataclass(frozen=True)
class StatsRow:
    language: str
    words: int
    chars_without_space: int
    short_words: int
    long_words: int

    @property
    def avg_word_length(self) -> float:
        return self.chars_without_space / self.words if self.words else 0.0


@dataclass(frozen=True)
class CorpusStats:
    rows: tuple[StatsRow, ...]
    total: StatsRow

    def to_tsv(self) -> str:
        lines = ["language\twords\tchars\tavg_word_len\tshort_words\tlong_words"]
        for r in (*self.rows, self.total):
            lines.append(
                f"{r.language}\t{r.words}\t{r.chars_without_space}\t"
                f"{r.avg_word_length:.2f}\t{r.short_words}\t{r.long_words}"
            )
        return "\n".join(lines) + "\n"


SHORT_MAX = 3
LONG_MIN = 7


def compute_stats(corpus: LabeledCorpus) -> CorpusStats:
    """Word counts and word-length profile per language.

    Lengths are in code points of the sanitized token, so a matra counts as
    one character.
    """
    if not corpus.documents:
        raise CorpusError("no documents")
    rows = []
    for lang, docs in corpus.by_label().items():
        lengths = [len(t) for d in docs for t in d.tokens]
        rows.append(
            StatsRow(
                language=lang,
                words=len(lengths),
                chars_without_space=sum(lengths),
                short_words=sum(1 for n in lengths if n <= SHORT_MAX),
                long_words=sum(1 for n in lengths if n >= LONG_MIN),
            )
        )
    total = StatsRow(
        "TOTAL",
        sum(r.words for r in rows),
        sum(r.chars_without_space for r in rows),
        sum(r.short_words for r in rows),
        sum(r.long_words for r in rows),
    )
    return CorpusStats(tuple(rows), total)
