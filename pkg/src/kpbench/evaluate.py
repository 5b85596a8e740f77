"""SemEval-style scoring and the statistics behind the result tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .candidates import select_for_model
from .corpus import AnnotatedDocument, ReferenceSet
from .rankers.base import RankedList, redundancy_filter


@dataclass(frozen=True)
class Prf:
    precision: float
    recall: float
    f: float

    @classmethod
    def from_counts(cls, matched: int, extracted: int, gold: int) -> "Prf":
        p = matched / extracted if extracted else 0.0
        r = matched / gold if gold else 0.0
        return cls(p, r, f_measure(p, r))


@dataclass(frozen=True)
class DocScore:
    matched: int
    extracted: int
    gold: int

    @property
    def prf(self) -> Prf:
        return Prf.from_counts(self.matched, self.extracted, self.gold)


@dataclass(frozen=True)
class EvalReport:
    n: int
    per_doc: Mapping[str, DocScore]
    micro: Prf = field(init=False)

    def __post_init__(self):
        m = sum(d.matched for d in self.per_doc.values())
        e = sum(d.extracted for d in self.per_doc.values())
        g = sum(d.gold for d in self.per_doc.values())
        object.__setattr__(self, "micro", Prf.from_counts(m, e, g))

    def doc_f(self) -> dict[str, float]:
        return {k: v.prf.f for k, v in self.per_doc.items()}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "micro": {"precision": self.micro.precision, "recall": self.micro.recall, "f": self.micro.f},
            "per_doc": {
                k: {"matched": d.matched, "extracted": d.extracted, "gold": d.gold,
                    "precision": d.prf.precision, "recall": d.prf.recall, "f": d.prf.f}
                for k, d in sorted(self.per_doc.items())
            },
        }


def f_measure(p: float, r: float) -> float:
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def top_n_stems(ranked: RankedList, n: int) -> list[str]:
    return redundancy_filter(ranked).stems()[:n]


def matched_golds(extracted: Sequence[str], golds: Sequence[frozenset[str]]) -> set[int]:
    """Indices of gold keyphrases matched by the extracted stems.

    Alternatives of different gold keyphrases are disjoint and extracted stems
    are distinct, so the maximum one-to-one matching pairs every gold with at
    least one extracted alternative.
    """
    ext = set(extracted)
    return {i for i, alts in enumerate(golds) if alts & ext}


def f_at_n(ranked: Mapping[str, RankedList], refs: ReferenceSet, n: int = 10) -> EvalReport:
    if n < 1:
        raise ValueError("n must be >= 1")
    missing = sorted(k for k in ranked if k not in refs)
    if missing:
        raise KeyError(f"documents missing from references: {', '.join(missing)}")
    per_doc = {}
    for doc_id, rl in ranked.items():
        golds = refs[doc_id]
        ext = top_n_stems(rl, n)
        per_doc[doc_id] = DocScore(len(matched_golds(ext, golds)), len(ext), len(golds))
    return EvalReport(n, per_doc)


def sample_stddev(values: Sequence[float]) -> float:
    if len(values) < 2:
        raise ValueError("sample standard deviation needs at least 2 values")
    mean = sum(values) / len(values)
    return math.sqrt(sum((x - mean) ** 2 for x in values) / (len(values) - 1))


# -- Student's t ---------------------------------------------------------------

def _betacf(a: float, b: float, x: float, rtol: float = 1e-10, max_iter: int = 10_000) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > tiny else tiny)
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < rtol:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x in (0.0, 1.0):
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _betacf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _betacf(b, a, 1.0 - x) / b


def t_two_tailed_p(t: float, dof: int) -> float:
    if math.isinf(t):
        return 0.0
    return betainc(dof / 2.0, 0.5, dof / (dof + t * t))


def paired_ttest(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    """Two-tailed paired t-test p-value over documents present in both maps."""
    if set(a) != set(b):
        raise ValueError("paired samples must cover the same documents")
    if len(a) < 2:
        raise ValueError("paired t-test needs at least 2 documents")
    diffs = [a[k] - b[k] for k in sorted(a)]
    n = len(diffs)
    mean = sum(diffs) / n
    var = sum((d - mean) ** 2 for d in diffs) / (n - 1)
    if var == 0.0:
        if mean == 0.0:
            raise ValueError("zero variance of differences")
        return 0.0
    t = mean / math.sqrt(var / n)
    return t_two_tailed_p(t, n - 1)


# -- agreement and corpus statistics -------------------------------------------

def all_models_overlap(ranked_by_model: Mapping[str, Mapping[str, RankedList]], refs: ReferenceSet,
                       n: int = 10) -> float:
    """Share of gold keyphrases found in the top ``n`` of every model."""
    if not ranked_by_model:
        raise ValueError("no models given")
    doc_sets = {name: frozenset(r) for name, r in ranked_by_model.items()}
    first = next(iter(doc_sets.values()))
    if any(s != first for s in doc_sets.values()):
        raise ValueError("models were run on different document sets")
    common = total = 0
    for doc_id in sorted(first):
        golds = refs[doc_id]
        found = None
        for runs in ranked_by_model.values():
            hit = matched_golds(top_n_stems(runs[doc_id], n), golds)
            found = hit if found is None else found & hit
        common += len(found)
        total += len(golds)
    return common / total if total else 0.0


@dataclass(frozen=True)
class CorpusStats:
    avg_sentences: float
    avg_words: float
    max_recall: float


def doc_gold_present(doc: AnnotatedDocument, golds: Sequence[frozenset[str]]) -> int:
    # only sequences as long as the longest alternative matter
    longest = max(a.count(" ") + 1 for alts in golds for a in alts)
    wanted = {a for alts in golds for a in alts}
    found = set()
    for sent in doc.sentences:
        stems = [t.stem for t in sent.tokens]
        for i in range(len(stems)):
            for j in range(i + 1, min(len(stems), i + longest) + 1):
                if stems[j - 1] == "":
                    break
                s = " ".join(stems[i:j])
                if s in wanted:
                    found.add(s)
    return sum(1 for alts in golds if alts & found)


def corpus_stats(docs: Sequence[AnnotatedDocument], refs: ReferenceSet) -> CorpusStats:
    """Average sentences and words per document, and corpus-level max recall."""
    if not docs:
        raise ValueError("empty corpus")
    present = gold = 0
    for doc in docs:
        golds = refs[doc.id]
        present += doc_gold_present(doc, golds)
        gold += len(golds)
    return CorpusStats(
        sum(len(d.sentences) for d in docs) / len(docs),
        sum(d.n_words for d in docs) / len(docs),
        present / gold,
    )


@dataclass(frozen=True)
class CandidateStats:
    avg_candidates: float
    max_recall: float


def candidate_stats(model: str, docs: Sequence[AnnotatedDocument], refs: ReferenceSet,
                    lasf: int = 2) -> CandidateStats:
    if not docs:
        raise ValueError("empty corpus")
    n_cands = present = gold = 0
    for doc in docs:
        cands = select_for_model(model, doc, lasf)
        golds = refs[doc.id]
        n_cands += len(cands)
        present += sum(1 for alts in golds if any(a in cands for a in alts))
        gold += len(golds)
    return CandidateStats(n_cands / len(docs), present / gold)


# -- plain-text tables ---------------------------------------------------------

def render_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    lines = []
    for k, row in enumerate([header, *rows]):
        cells = [str(c).ljust(widths[0]) if i == 0 else str(c).rjust(widths[i]) for i, c in enumerate(row)]
        lines.append("  ".join(cells).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)
