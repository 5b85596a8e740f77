from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from ..candidates import Candidate

# Scores closer than this are ties; keeps orderings stable under float noise.
SCORE_DECIMALS = 10


@dataclass(frozen=True)
class RankedItem:
    stem: str
    surface: str
    score: float


@dataclass(frozen=True)
class RankedList:
    doc_id: str
    items: tuple[RankedItem, ...]

    def __len__(self) -> int:
        return len(self.items)

    def stems(self) -> list[str]:
        return [it.stem for it in self.items]

    def top(self, n: int) -> "RankedList":
        return RankedList(self.doc_id, self.items[:n])


def order_key(score: float, cand: Candidate) -> tuple:
    """Score desc, then first position, length in words, stem form."""
    return (-round(score, SCORE_DECIMALS), cand.first_position, cand.length_words, cand.stem_form)


def rank_scored(doc_id: str, scored: Iterable[tuple[Candidate, float]]) -> RankedList:
    ordered = sorted(scored, key=lambda cs: order_key(cs[1], cs[0]))
    return RankedList(doc_id, tuple(RankedItem(c.stem_form, c.first_surface, s) for c, s in ordered))


def rank_by(cands, score: Callable[[Candidate], float]) -> RankedList:
    return rank_scored(cands.doc_id, ((c, score(c)) for c in cands))


def _contains(outer: list[str], inner: list[str]) -> bool:
    k = len(inner)
    return any(outer[i:i + k] == inner for i in range(len(outer) - k + 1))


def redundancy_filter(ranked: RankedList) -> RankedList:
    """Drop items whose words appear contiguously inside a higher-kept item."""
    kept: list[RankedItem] = []
    kept_words: list[list[str]] = []
    for item in ranked.items:
        words = item.stem.split(" ")
        if any(_contains(k, words) for k in kept_words):
            continue
        kept.append(item)
        kept_words.append(words)
    return RankedList(ranked.doc_id, tuple(kept))
