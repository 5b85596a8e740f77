"""Kea and WINGNUS: naive Bayes over per-candidate features."""

from __future__ import annotations

from typing import Sequence

from ..candidates import Candidate, CandidateSet, select_ngrams_kea, select_np_rules
from ..corpus import AnnotatedDocument, DfTable, ReferenceSet, idf
from .base import RankedList, rank_by
from .naive_bayes import NbModel, nb_score

FEATURES = {
    "kea": ("tfidf", "first_pos_rel"),
    "wingnus": ("tfidf", "first_pos_rel", "length_words"),
}
SELECTORS = {"kea": select_ngrams_kea, "wingnus": select_np_rules}


def candidate_features(model: str, c: Candidate, df: DfTable) -> tuple[float, ...]:
    tfidf = c.tf * idf(df, c.stem_form)
    if model == "kea":
        return (tfidf, c.first_pos_rel)
    if model == "wingnus":
        return (tfidf, c.first_pos_rel, float(c.length_words))
    raise ValueError(f"model {model!r} has no feature definition")


def _check(model: NbModel, name: str) -> None:
    want = FEATURES[name]
    if model.n_features != len(want):
        raise ValueError(f"{name} needs a {len(want)}-feature model, got {model.n_features}")
    if model.feature_names and tuple(model.feature_names) != want:
        raise ValueError(f"{name} expects features {want}, model has {model.feature_names}")


def rank_kea(cands: CandidateSet, df: DfTable, model: NbModel) -> RankedList:
    _check(model, "kea")
    return rank_by(cands, lambda c: nb_score(model, candidate_features("kea", c, df)))


def rank_wingnus(cands: CandidateSet, df: DfTable, model: NbModel) -> RankedList:
    _check(model, "wingnus")
    return rank_by(cands, lambda c: nb_score(model, candidate_features("wingnus", c, df)))


def build_training_rows(docs: Sequence[AnnotatedDocument], refs: ReferenceSet, model: str,
                        df: DfTable) -> list[tuple[tuple[float, ...], bool]]:
    if model not in SELECTORS:
        raise ValueError(f"model {model!r} requires no training")
    rows = []
    for doc in docs:
        golds = refs[doc.id]
        gold_stems = set().union(*golds)
        for c in sorted(SELECTORS[model](doc), key=lambda c: c.stem_form):
            rows.append((candidate_features(model, c, df), c.stem_form in gold_stems))
    if not any(label for _, label in rows):
        raise ValueError("no positive training rows: no candidate matches a gold keyphrase")
    return rows
