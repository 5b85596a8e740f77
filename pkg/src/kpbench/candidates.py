"""Candidate selection: the five model-specific strategies and the shared filter."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .corpus import AnnotatedDocument, ReferenceSet
from .textcore import Stopwords, Token, english_stopwords, is_punct_word

NOUN_TAGS = frozenset({"NN", "NNS", "NNP", "NNPS"})
ADJ_TAGS = frozenset({"JJ", "JJR", "JJS"})
NOUN_ADJ_TAGS = NOUN_TAGS | ADJ_TAGS
MAX_NP_WORDS = 4


@dataclass(frozen=True)
class Candidate:
    stem_form: str
    surface_forms: tuple[tuple[str, ...], ...]
    positions: tuple[int, ...]
    doc_n_tokens: int

    @property
    def tf(self) -> int:
        return len(self.positions)

    @property
    def length_words(self) -> int:
        return self.stem_form.count(" ") + 1

    @property
    def first_position(self) -> int:
        return self.positions[0]

    @property
    def first_pos_rel(self) -> float:
        return self.positions[0] / self.doc_n_tokens

    @property
    def first_surface(self) -> str:
        return " ".join(self.surface_forms[0])

    @property
    def stem_words(self) -> frozenset[str]:
        return frozenset(self.stem_form.split(" "))


@dataclass(frozen=True)
class CandidateSet:
    doc_id: str
    n_tokens: int
    by_stem: Mapping[str, Candidate] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.by_stem)

    def __iter__(self) -> Iterator[Candidate]:
        return iter(self.by_stem.values())

    def __contains__(self, stem_form: str) -> bool:
        return stem_form in self.by_stem

    def stems(self) -> set[str]:
        return set(self.by_stem)


# An occurrence is (document offset of first token, tokens).
Occurrence = tuple[int, Sequence[Token]]


def group_occurrences(doc_id: str, n_tokens: int, occurrences: Iterable[Occurrence]) -> CandidateSet:
    grouped: dict[str, list[tuple[int, tuple[str, ...]]]] = {}
    for pos, toks in occurrences:
        stem_form = " ".join(t.stem for t in toks)
        grouped.setdefault(stem_form, []).append((pos, tuple(t.surface for t in toks)))
    by_stem = {}
    for stem_form, occ in grouped.items():
        occ.sort(key=lambda o: o[0])
        by_stem[stem_form] = Candidate(
            stem_form,
            tuple(o[1] for o in occ),
            tuple(o[0] for o in occ),
            n_tokens,
        )
    return CandidateSet(doc_id, n_tokens, by_stem)


def passes_shared_filter(words: Sequence[str]) -> bool:
    """Surface-level rule applied to every candidate occurrence.

    Rejects phrases under 3 characters and phrases with a one-character word
    or a word that is pure punctuation (or has nothing to stem).
    """
    if len(" ".join(words)) < 3:
        return False
    for w in words:
        if len(w) == 1 or is_punct_word(w) or not any(ch.isalnum() for ch in w):
            return False
    return True


def shared_filter(cands: CandidateSet) -> CandidateSet:
    occurrences = []
    for c in cands:
        for pos, surfaces in zip(c.positions, c.surface_forms):
            if passes_shared_filter(surfaces):
                occurrences.append((pos, c.stem_form, surfaces))
    by_stem: dict[str, tuple[list, list]] = {}
    for pos, stem_form, surfaces in occurrences:
        positions, forms = by_stem.setdefault(stem_form, ([], []))
        positions.append(pos)
        forms.append(surfaces)
    return CandidateSet(cands.doc_id, cands.n_tokens, {
        s: Candidate(s, tuple(forms), tuple(positions), cands.n_tokens)
        for s, (positions, forms) in by_stem.items()
    })


def _filtered(doc: AnnotatedDocument, occurrences: Iterable[Occurrence]) -> CandidateSet:
    kept = (o for o in occurrences if passes_shared_filter([t.surface for t in o[1]]))
    return group_occurrences(doc.id, doc.n_tokens, kept)


def _ngrams(doc: AnnotatedDocument, max_n: int) -> Iterator[Occurrence]:
    for sent in doc.sentences:
        toks = sent.tokens
        for i in range(len(toks)):
            for n in range(1, max_n + 1):
                if i + n > len(toks):
                    break
                yield sent.doc_offset + i, toks[i:i + n]


def select_ngrams(doc: AnnotatedDocument, max_n: int = 3) -> CandidateSet:
    return _filtered(doc, _ngrams(doc, max_n))


def select_ngrams_kea(doc: AnnotatedDocument, stopwords: Stopwords | None = None,
                      max_n: int = 3) -> CandidateSet:
    stop = stopwords or english_stopwords()
    return _filtered(doc, (
        (pos, toks) for pos, toks in _ngrams(doc, max_n)
        if toks[0].surface not in stop and toks[-1].surface not in stop
    ))


def _runs(doc: AnnotatedDocument, inside) -> Iterator[Occurrence]:
    """Maximal within-sentence runs of tokens satisfying ``inside``."""
    for sent in doc.sentences:
        start = None
        for i, tok in enumerate(sent.tokens):
            if inside(tok):
                if start is None:
                    start = i
            elif start is not None:
                yield sent.doc_offset + start, sent.tokens[start:i]
                start = None
        if start is not None:
            yield sent.doc_offset + start, sent.tokens[start:]


def select_noun_adj_sequences(doc: AnnotatedDocument) -> CandidateSet:
    return _filtered(doc, _runs(doc, lambda t: t.pos in NOUN_ADJ_TAGS))


def select_stopword_blocks(doc: AnnotatedDocument, lasf: int = 2,
                           stopwords: Stopwords | None = None) -> CandidateSet:
    if lasf < 1:
        raise ValueError(f"lasf must be >= 1, got {lasf}")
    stop = stopwords or english_stopwords()
    cands = _filtered(doc, _runs(doc, lambda t: not is_punct_word(t.surface) and t.surface not in stop))
    return CandidateSet(cands.doc_id, cands.n_tokens,
                        {s: c for s, c in cands.by_stem.items() if c.tf >= lasf})


def _tag_class(tok: Token) -> str:
    if tok.pos in ADJ_TAGS:
        return "J"
    if tok.pos in NOUN_TAGS:
        return "N"
    if tok.pos == "IN" and tok.surface.lower() == "of":
        return "o"
    return "x"


_SIMPLEX = re.compile(r"J*N+")


def np_rule_spans(tokens: Sequence[Token]) -> list[tuple[int, int]]:
    """(start, end) spans of simplex noun phrases and ``NP of NP`` phrases.

    Simplex phrases are maximal ``JJ* NN+`` matches; a maximal match longer
    than MAX_NP_WORDS is not a phrase.  Two simplex phrases joined by "of"
    form one more span.
    """
    tags = "".join(_tag_class(t) for t in tokens)
    simplex = [m.span() for m in _SIMPLEX.finditer(tags) if m.end() - m.start() <= MAX_NP_WORDS]
    starts = {s: e for s, e in simplex}
    spans = list(simplex)
    for s, e in simplex:
        if e < len(tags) and tags[e] == "o" and e + 1 in starts:
            spans.append((s, starts[e + 1]))
    return spans


def select_np_rules(doc: AnnotatedDocument) -> CandidateSet:
    def occurrences():
        for sent in doc.sentences:
            for s, e in np_rule_spans(sent.tokens):
                yield sent.doc_offset + s, sent.tokens[s:e]
    return _filtered(doc, occurrences())


def max_recall(cands: CandidateSet, refs: ReferenceSet) -> float:
    golds = refs[cands.doc_id]
    found = sum(1 for alts in golds if any(a in cands.by_stem for a in alts))
    return found / len(golds)


STRATEGIES = {
    "tfidf": select_ngrams,
    "kea": select_ngrams_kea,
    "topicrank": select_noun_adj_sequences,
    "kpminer": select_stopword_blocks,
    "wingnus": select_np_rules,
}


def select_for_model(model: str, doc: AnnotatedDocument, lasf: int = 2) -> CandidateSet:
    if model not in STRATEGIES:
        raise ValueError(f"unknown model {model!r}")
    if model == "kpminer":
        return select_stopword_blocks(doc, lasf)
    return STRATEGIES[model](doc)
