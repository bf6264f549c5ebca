"""Devanagari character taxonomy and text sanitization.

Every code point maps to exactly one :class:`CharClass`.  Only the core
Devanagari block (U+0900-U+097F) is recognised; the extended and Vedic
blocks are treated as foreign text.  No Unicode normalisation is applied,
so a precomposed nukta letter (U+0958) and its decomposed spelling
(U+0915 U+093C) produce different features.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache


class CharClass(enum.Enum):
    INDEPENDENT_VOWEL = "independent_vowel"
    CONSONANT = "consonant"
    MATRA = "matra"
    SIGN = "sign"
    DIGIT = "devanagari_digit"
    PUNCT = "devanagari_punct"
    WHITESPACE = "whitespace"
    OTHER = "other"


# Inclusive code-point ranges inside U+0900..U+097F.  Together they cover
# the whole block.
_RANGES: dict[CharClass, tuple[tuple[int, int], ...]] = {
    CharClass.INDEPENDENT_VOWEL: ((0x0904, 0x0914), (0x0960, 0x0961), (0x0972, 0x0977)),
    CharClass.CONSONANT: ((0x0915, 0x0939), (0x0958, 0x095F), (0x0978, 0x097F)),
    CharClass.MATRA: (
        (0x093A, 0x093B),
        (0x093E, 0x094C),
        (0x094E, 0x094F),
        (0x0955, 0x0957),
        (0x0962, 0x0963),
    ),
    CharClass.SIGN: (
        (0x0900, 0x0903),
        (0x093C, 0x093D),
        (0x094D, 0x094D),
        (0x0950, 0x0950),  # OM
        (0x0951, 0x0954),
        (0x0970, 0x0971),
    ),
    CharClass.DIGIT: ((0x0966, 0x096F),),
    CharClass.PUNCT: ((0x0964, 0x0965),),
}

_BLOCK_TABLE: list[CharClass] = [CharClass.OTHER] * 0x80
for _cls, _spans in _RANGES.items():
    for _lo, _hi in _spans:
        for _cp in range(_lo, _hi + 1):
            _BLOCK_TABLE[_cp - 0x0900] = _cls
del _cls, _spans, _lo, _hi, _cp

LETTER_CLASSES = frozenset(
    {CharClass.INDEPENDENT_VOWEL, CharClass.CONSONANT, CharClass.MATRA, CharClass.SIGN}
)


def classify_char(c: str | int) -> CharClass:
    """Return the class of a single character (or code point)."""
    cp = c if isinstance(c, int) else ord(c)
    if 0x0900 <= cp <= 0x097F:
        return _BLOCK_TABLE[cp - 0x0900]
    if chr(cp).isspace():
        return CharClass.WHITESPACE
    return CharClass.OTHER


@dataclass(frozen=True)
class PhonemeInventory:
    independent_vowels: tuple[str, ...]
    consonants: tuple[str, ...]
    matras: tuple[str, ...]
    signs: tuple[str, ...]


@lru_cache(maxsize=None)
def phoneme_inventory() -> PhonemeInventory:
    def members(cls: CharClass) -> tuple[str, ...]:
        return tuple(chr(0x0900 + i) for i, k in enumerate(_BLOCK_TABLE) if k is cls)

    return PhonemeInventory(
        independent_vowels=members(CharClass.INDEPENDENT_VOWEL),
        consonants=members(CharClass.CONSONANT),
        matras=members(CharClass.MATRA),
        signs=members(CharClass.SIGN),
    )


_DROP = frozenset({CharClass.OTHER, CharClass.DIGIT, CharClass.PUNCT})
_WS_RUN = re.compile(r"\s+")


def sanitize(text: str) -> str:
    """Strip everything but Devanagari letters and signs; collapse whitespace.

    Removed characters are deleted in place, so ``"क1ख"`` becomes ``"कख"``
    rather than two words.
    """
    kept = []
    for ch in text:
        cls = classify_char(ch)
        if cls is CharClass.WHITESPACE:
            kept.append(" ")
        elif cls not in _DROP:
            kept.append(ch)
    return _WS_RUN.sub(" ", "".join(kept)).strip()


def tokenize(text: str) -> list[str]:
    return sanitize(text).split()
