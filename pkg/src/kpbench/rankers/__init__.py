"""Keyphrase ranking models and the shared extraction pipeline."""

from __future__ import annotations

from dataclasses import dataclass

from ..candidates import select_for_model
from ..corpus import AnnotatedDocument, DfTable
from .base import RankedItem, RankedList, redundancy_filter
from .frequency import kpminer_boost, rank_kpminer, rank_tfidf
from .naive_bayes import NbModel, load_model, nb_score, nb_train, save_model
from .supervised import FEATURES, build_training_rows, candidate_features, rank_kea, rank_wingnus
from .topicrank import Topic, cluster_topics, rank_topicrank, rank_topics

MODELS = ("tfidf", "kea", "topicrank", "kpminer", "wingnus")
SUPERVISED = ("kea", "wingnus")


@dataclass(frozen=True)
class RankerParams:
    lasf: int = 2
    alpha: float = 2.3
    sigma: float = 3.0
    damping: float = 0.85


def rank_document(model: str, doc: AnnotatedDocument, df: DfTable | None = None,
                  nb: NbModel | None = None, params: RankerParams = RankerParams()) -> RankedList:
    """Candidate selection and scoring for one document (no post-filtering)."""
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    if model != "topicrank" and df is None:
        raise ValueError(f"model {model!r} needs a document-frequency table")
    if model in SUPERVISED and nb is None:
        raise ValueError(f"model {model!r} needs a trained model file")
    cands = select_for_model(model, doc, params.lasf)
    if model == "tfidf":
        return rank_tfidf(cands, df)
    if model == "kpminer":
        return rank_kpminer(cands, df, params.alpha, params.sigma)
    if model == "topicrank":
        return rank_topicrank(cands, params.damping)
    if model == "kea":
        return rank_kea(cands, df, nb)
    return rank_wingnus(cands, df, nb)


def extract(model: str, doc: AnnotatedDocument, df: DfTable | None = None, nb: NbModel | None = None,
            top: int = 10, params: RankerParams = RankerParams()) -> RankedList:
    """Rank, drop redundant keyphrases, then cut to ``top``."""
    return redundancy_filter(rank_document(model, doc, df, nb, params)).top(top)


__all__ = [
    "FEATURES", "MODELS", "SUPERVISED", "NbModel", "RankedItem", "RankedList", "RankerParams",
    "Topic", "build_training_rows", "candidate_features", "cluster_topics", "extract",
    "kpminer_boost", "load_model", "nb_score", "nb_train", "rank_document", "rank_kea",
    "rank_kpminer", "rank_tfidf", "rank_topicrank", "rank_topics", "rank_wingnus",
    "redundancy_filter", "save_model",
]
