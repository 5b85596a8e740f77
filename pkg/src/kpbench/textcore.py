"""Token/sentence types and the word-level helpers every pipeline shares."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .porter import porter_stem

_EXTRA_PUNCT = frozenset("$+^`~|<>=")


def stem_word(word: str) -> str:
    """Porter stem of the lowercased word.

    Input without any letter is returned lowercased and otherwise untouched.
    """
    lowered = word.lower()
    if not any(ch.isalpha() for ch in lowered):
        return lowered
    return porter_stem(lowered)


def stem_phrase(words: Sequence[str]) -> str:
    if not words:
        raise ValueError("empty phrase")
    return " ".join(stem_word(w) for w in words)


def _is_punct_char(ch: str) -> bool:
    return ch in _EXTRA_PUNCT or unicodedata.category(ch).startswith("P")


@lru_cache(maxsize=65536)
def is_punct_word(word: str) -> bool:
    """True when no character of ``word`` is anything but punctuation.

    The empty string counts as punctuation (vacuously).
    """
    return all(_is_punct_char(ch) for ch in word)


def token_stem(surface: str) -> str:
    """Stem stored on a token; empty when the surface has no alphanumerics."""
    if not any(ch.isalnum() for ch in surface):
        return ""
    return stem_word(surface)


@dataclass(frozen=True, slots=True)
class Token:
    surface: str
    pos: str
    stem: str = field(init=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "stem", token_stem(self.surface))

    @property
    def lower(self) -> str:
        return self.surface.lower()


@dataclass(frozen=True, slots=True)
class Sentence:
    tokens: tuple[Token, ...]
    doc_offset: int = 0

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def n_words(self) -> int:
        """Tokens that are not pure punctuation."""
        return sum(1 for t in self.tokens if not is_punct_word(t.surface))


class Stopwords:
    """Case-insensitive stoplist."""

    def __init__(self, entries: Iterable[str]):
        self.entries = frozenset(e.strip().lower() for e in entries if e.strip())

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_file(cls, path: str | Path) -> "Stopwords":
        with open(path, encoding="utf-8") as fh:
            return cls(_strip_comments(fh))


def _strip_comments(lines: Iterable[str]) -> list[str]:
    out = []
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


@lru_cache(maxsize=1)
def english_stopwords() -> Stopwords:
    text = resources.files("kpbench").joinpath("data/stopwords_en.txt").read_text("utf-8")
    return Stopwords(_strip_comments(text.splitlines()))
