"""TopicRank: cluster candidates into topics, rank topics with TextRank."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..candidates import Candidate, CandidateSet
from ..pagerank import weighted_pagerank
from .base import RankedItem, RankedList, order_key

SIMILARITY_THRESHOLD = 0.25
_TIE_EPS = 1e-12


@dataclass(frozen=True)
class Topic:
    members: tuple[Candidate, ...]
    score: float = 0.0

    @property
    def representative(self) -> Candidate:
        """First occurring member; shorter, then lexicographically smaller, on ties."""
        return min(self.members, key=lambda c: (c.first_position, c.length_words, c.stem_form))

    @property
    def positions(self) -> list[int]:
        return sorted(p for c in self.members for p in c.positions)


def stem_overlap_matrix(cands: list[Candidate]) -> np.ndarray:
    """|A & B| / min(|A|, |B|) over candidate stem-word sets."""
    vocab: dict[str, int] = {}
    rows = [[vocab.setdefault(w, len(vocab)) for w in c.stem_words] for c in cands]
    X = np.zeros((len(cands), len(vocab)))
    for i, cols in enumerate(rows):
        X[i, cols] = 1.0
    inter = X @ X.T
    sizes = X.sum(axis=1)
    return inter / np.minimum(sizes[:, None], sizes[None, :])


def cluster_topics(cands: CandidateSet, threshold: float = SIMILARITY_THRESHOLD) -> list[list[Candidate]]:
    """Average-linkage agglomerative clustering of candidates.

    Repeatedly merges the pair of clusters with the highest average pairwise
    similarity while it is at least ``threshold``.  Clusters are identified by
    their lexicographically smallest stem form, and equal linkages merge the
    lexicographically smallest pair first.  Returns member lists in that order.
    """
    items = sorted(cands, key=lambda c: c.stem_form)
    n = len(items)
    if n == 0:
        return []
    sim = stem_overlap_matrix(items)
    np.fill_diagonal(sim, 0.0)
    link_sum = sim.copy()
    size = np.ones(n)
    members = {i: [i] for i in range(n)}
    active = np.ones(n, dtype=bool)
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)

    while active.sum() > 1:
        linkage = link_sum / np.outer(size, size)
        valid = upper & active[:, None] & active[None, :]
        linkage = np.where(valid, linkage, -np.inf)
        best = linkage.max()
        if best < threshold - _TIE_EPS:
            break
        flat = np.flatnonzero(linkage.ravel() >= best - _TIE_EPS)[0]
        a, b = divmod(int(flat), n)
        link_sum[a, :] += link_sum[b, :]
        link_sum[:, a] += link_sum[:, b]
        link_sum[a, a] = 0.0
        size[a] += size[b]
        members[a].extend(members.pop(b))
        active[b] = False

    return [[items[i] for i in sorted(members[k])] for k in sorted(members)]


def topic_graph(topics: list[list[Candidate]], chunk: int = 2048) -> np.ndarray:
    """Edge weight = sum over occurrence pairs across two topics of 1/distance."""
    t = len(topics)
    pos = np.array([p for members in topics for c in members for p in c.positions], dtype=float)
    label = np.array([k for k, members in enumerate(topics) for c in members for _ in c.positions])
    onehot = np.zeros((len(pos), t))
    onehot[np.arange(len(pos)), label] = 1.0
    w = np.zeros((t, t))
    for lo in range(0, len(pos), chunk):
        d = np.abs(pos[lo:lo + chunk, None] - pos[None, :])
        inv = np.divide(1.0, d, out=np.zeros_like(d), where=d > 0)
        w += onehot[lo:lo + chunk].T @ (inv @ onehot)
    np.fill_diagonal(w, 0.0)
    return w


def rank_topics(cands: CandidateSet, damping: float = 0.85) -> list[Topic]:
    clusters = cluster_topics(cands)
    if not clusters:
        return []
    scores = weighted_pagerank(topic_graph(clusters), damping)
    return [Topic(tuple(m), float(s)) for m, s in zip(clusters, scores)]


def rank_topicrank(cands: CandidateSet, damping: float = 0.85) -> RankedList:
    topics = rank_topics(cands, damping)
    reps = [(t.representative, t.score) for t in topics]
    reps.sort(key=lambda cs: order_key(cs[1], cs[0]))
    return RankedList(cands.doc_id, tuple(RankedItem(c.stem_form, c.first_surface, s) for c, s in reps))
