"""Preprocessing levels as document-to-document transforms.

Level 1 is the ingested document.  Levels 2 and 3 keep whitelisted section
kinds; level 4 additionally drops the least informative sentences outside the
title and abstract, ranked by length-normalized TextRank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import AnnotatedDocument
from .pagerank import weighted_pagerank

LEVEL2_KINDS = frozenset({
    "title", "header", "abstract", "introduction", "related_work", "background",
    "body", "conclusion",
})
LEVEL3_KINDS = frozenset({
    "title", "header", "abstract", "introduction", "related_work", "background",
    "conclusion",
})
PROTECTED_KINDS = frozenset({"title", "abstract"})
CONTENT_POS_PREFIXES = ("NN", "JJ", "VB")


class EmptyDocumentError(ValueError):
    pass


@dataclass(frozen=True)
class LevelConfig:
    level: int = 1
    reduction_ratio: float = 0.865
    damping: float = 0.85

    def __post_init__(self):
        if self.level not in (1, 2, 3, 4):
            raise ValueError(f"level must be 1..4, got {self.level}")
        if not 0 < self.reduction_ratio <= 1:
            raise ValueError(f"reduction_ratio must be in (0, 1], got {self.reduction_ratio}")
        if not 0 < self.damping < 1:
            raise ValueError(f"damping must be in (0, 1), got {self.damping}")


def _keep_kinds(doc: AnnotatedDocument, kinds: frozenset[str], level: int) -> AnnotatedDocument:
    kept = [(kind, sents) for kind, sents in doc.section_tokens() if kind in kinds]
    out = doc.rebuilt(kept, level=max(doc.level, level))
    if out.n_tokens == 0:
        raise EmptyDocumentError(f"{doc.id}: document emptied by filtering")
    return out


def filter_level2(doc: AnnotatedDocument) -> AnnotatedDocument:
    return _keep_kinds(doc, LEVEL2_KINDS, 2)


def filter_level3(doc: AnnotatedDocument) -> AnnotatedDocument:
    return _keep_kinds(doc, LEVEL3_KINDS, 3)


def _content_stems(tokens) -> set[str]:
    return {t.stem for t in tokens if t.stem and t.pos.startswith(CONTENT_POS_PREFIXES)}


def sentence_graph(doc: AnnotatedDocument) -> np.ndarray:
    """Symmetric matrix of shared content-word stem counts between sentences."""
    stems = [_content_stems(s.tokens) for s in doc.sentences]
    n = len(stems)
    w = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            shared = len(stems[i] & stems[j])
            if shared:
                w[i, j] = w[j, i] = shared
    return w


def textrank_sentences(doc: AnnotatedDocument, damping: float = 0.85) -> list[tuple[int, float]]:
    """(sentence index, PageRank / length in words), best first.

    Equal scores keep document order.
    """
    sentences = doc.sentences
    if not sentences:
        raise ValueError(f"{doc.id}: no sentences")
    scores = weighted_pagerank(sentence_graph(doc), damping)
    normalized = [(i, float(scores[i]) / max(s.n_words, 1)) for i, s in enumerate(sentences)]
    return sorted(normalized, key=lambda item: (-item[1], item[0]))


def n_kept(ratio: float, count: int) -> int:
    # guard against ratio*count landing a hair above an integer
    return min(count, math.ceil(ratio * count - 1e-9))


def reduce_level4(doc: AnnotatedDocument, cfg: LevelConfig = LevelConfig(level=4)) -> AnnotatedDocument:
    flat = [(kind, sent) for kind, sents in doc.section_tokens() for sent in sents]
    others = [i for i, (kind, _) in enumerate(flat) if kind not in PROTECTED_KINDS]
    keep = {i for i, (kind, _) in enumerate(flat) if kind in PROTECTED_KINDS}
    if others:
        budget = n_kept(cfg.reduction_ratio, len(others))
        candidates = set(others)
        ranked = [i for i, _ in textrank_sentences(doc, cfg.damping) if i in candidates]
        keep.update(ranked[:budget])

    sections = []
    idx = 0
    for kind, sents in doc.section_tokens():
        kept = []
        for sent in sents:
            if idx in keep:
                kept.append(sent)
            idx += 1
        if kept:
            sections.append((kind, kept))
    return doc.rebuilt(sections, level=4)


def apply_level(doc: AnnotatedDocument, cfg: LevelConfig) -> AnnotatedDocument:
    """Run the transform chain up to ``cfg.level``; every step is idempotent."""
    if cfg.level >= 2:
        doc = filter_level2(doc)
    if cfg.level >= 3:
        doc = filter_level3(doc)
    if cfg.level == 4 and doc.level < 4:
        doc = reduce_level4(doc, cfg)
    return doc
