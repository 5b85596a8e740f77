"""TF x IDF and the KP-Miner length-compensated variant."""

from __future__ import annotations

from ..candidates import CandidateSet
from ..corpus import DfTable, idf
from .base import RankedList, rank_by


def rank_tfidf(cands: CandidateSet, df: DfTable) -> RankedList:
    return rank_by(cands, lambda c: c.tf * idf(df, c.stem_form))


def kpminer_boost(cands: CandidateSet, alpha: float = 2.3, sigma: float = 3.0) -> float:
    """Boost for multi-word candidates: N_d / (P_d * alpha), capped at sigma.

    N_d and P_d are occurrence totals over all and over multi-word candidates.
    """
    total = sum(c.tf for c in cands)
    multi = sum(c.tf for c in cands if c.length_words > 1)
    if multi == 0:
        return sigma
    return min(total / (multi * alpha), sigma)


def rank_kpminer(cands: CandidateSet, df: DfTable, alpha: float = 2.3, sigma: float = 3.0) -> RankedList:
    if alpha <= 0 or sigma <= 0:
        raise ValueError("alpha and sigma must be positive")
    boost = kpminer_boost(cands, alpha, sigma)

    def score(c):
        w = c.tf * idf(df, c.stem_form)
        return w * boost if c.length_words > 1 else w

    return rank_by(cands, score)
