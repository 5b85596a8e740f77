"""Annotated documents, gold references, splits and document-frequency tables."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .textcore import Sentence, Token, stem_phrase

SECTION_KINDS = frozenset({
    "title", "header", "abstract", "introduction", "related_work", "background",
    "body", "conclusion", "table", "figure", "caption", "equation", "note",
    "copyright", "references", "other",
})
_SINGLETON_KINDS = ("title", "abstract")


class CorpusFormatError(ValueError):
    """Raised for malformed document, reference, split or df files."""


def normalize_kind(kind: str) -> str:
    k = kind.strip().lower().replace("-", "_").replace(" ", "_")
    return k if k in SECTION_KINDS else "other"


@dataclass(frozen=True)
class Section:
    kind: str
    sentences: tuple[Sentence, ...]


@dataclass(frozen=True)
class AnnotatedDocument:
    id: str
    sections: tuple[Section, ...]
    level: int = 1

    @classmethod
    def build(cls, doc_id: str, sections: Iterable[tuple[str, Iterable[Sequence[Token]]]],
              level: int = 1) -> "AnnotatedDocument":
        """Assemble a document from (kind, token lists), assigning offsets."""
        offset = 0
        built = []
        for kind, sentences in sections:
            sents = []
            for toks in sentences:
                toks = tuple(toks)
                if not toks:
                    continue
                sents.append(Sentence(toks, offset))
                offset += len(toks)
            built.append(Section(kind, tuple(sents)))
        return cls(doc_id, tuple(built), level)

    def rebuilt(self, sections: Iterable[tuple[str, Iterable[Sequence[Token]]]],
                level: int | None = None) -> "AnnotatedDocument":
        return AnnotatedDocument.build(self.id, sections, self.level if level is None else level)

    def section_tokens(self) -> list[tuple[str, list[tuple[Token, ...]]]]:
        return [(s.kind, [sent.tokens for sent in s.sentences]) for s in self.sections]

    @property
    def sentences(self) -> list[Sentence]:
        return [sent for sec in self.sections for sent in sec.sentences]

    def iter_tokens(self) -> Iterator[Token]:
        for sent in self.sentences:
            yield from sent.tokens

    @property
    def n_tokens(self) -> int:
        return sum(len(sent) for sent in self.sentences)

    @property
    def n_words(self) -> int:
        return sum(sent.n_words for sent in self.sentences)


# -- documents ---------------------------------------------------------------

def _require(cond: bool, where: str, msg: str) -> None:
    if not cond:
        raise CorpusFormatError(f"{where}: {msg}")


def parse_document(data: object, source: str = "<document>") -> AnnotatedDocument:
    _require(isinstance(data, dict), source, "top-level value must be an object")
    doc_id = data.get("id")
    _require(isinstance(doc_id, str) and doc_id != "", f"{source}: field 'id'", "missing or not a non-empty string")
    raw_sections = data.get("sections")
    _require(isinstance(raw_sections, list), f"{source}: field 'sections'", "missing or not a list")
    level = data.get("level", 1)
    _require(level in (1, 2, 3, 4), f"{source}: field 'level'", f"must be 1..4, got {level!r}")

    sections = []
    counts = {k: 0 for k in _SINGLETON_KINDS}
    for i, sec in enumerate(raw_sections):
        where = f"{source}: sections[{i}]"
        _require(isinstance(sec, dict), where, "not an object")
        _require(isinstance(sec.get("kind"), str), f"{where}.kind", "missing or not a string")
        kind = normalize_kind(sec["kind"])
        if kind in counts:
            counts[kind] += 1
            _require(counts[kind] == 1, f"{where}.kind", f"more than one '{kind}' section")
        sents = sec.get("sentences")
        _require(isinstance(sents, list), f"{where}.sentences", "missing or not a list")
        token_lists = []
        for j, sent in enumerate(sents):
            _require(isinstance(sent, list), f"{where}.sentences[{j}]", "not a list of tokens")
            toks = []
            for k, tok in enumerate(sent):
                twhere = f"{where}.sentences[{j}][{k}]"
                _require(isinstance(tok, dict), twhere, "token is not an object")
                surface, pos = tok.get("surface"), tok.get("pos")
                _require(isinstance(surface, str) and surface != "", f"{twhere}.surface", "missing or empty")
                _require(isinstance(pos, str) and pos != "", f"{twhere}.pos", "missing or empty")
                toks.append(Token(surface, pos))
            token_lists.append(toks)
        sections.append((kind, token_lists))

    doc = AnnotatedDocument.build(doc_id, sections, level)
    if doc.n_tokens == 0:
        raise CorpusFormatError(f"{source}: no tokens")
    return doc


def load_document(path: str | Path) -> AnnotatedDocument:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return parse_document(data, str(path))


def document_to_json(doc: AnnotatedDocument) -> dict:
    return {
        "id": doc.id,
        "level": doc.level,
        "sections": [
            {"kind": sec.kind,
             "sentences": [[{"surface": t.surface, "pos": t.pos} for t in sent.tokens]
                           for sent in sec.sentences]}
            for sec in doc.sections
        ],
    }


def save_document(doc: AnnotatedDocument, path: str | Path) -> None:
    text = json.dumps(document_to_json(doc), ensure_ascii=False, separators=(",", ":"))
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_corpus(directory: str | Path, ids: Iterable[str] | None = None) -> list[AnnotatedDocument]:
    """Load every ``*.json`` document in a directory, sorted by id.

    With ``ids`` given, only those documents are kept and all must be present.
    """
    docs: dict[str, AnnotatedDocument] = {}
    for path in sorted(Path(directory).glob("*.json")):
        doc = load_document(path)
        if doc.id in docs:
            raise CorpusFormatError(f"{path}: duplicate document id {doc.id!r}")
        docs[doc.id] = doc
    if ids is not None:
        wanted = set(ids)
        missing = sorted(wanted - docs.keys())
        if missing:
            raise CorpusFormatError(f"{directory}: documents not found: {', '.join(missing)}")
        docs = {k: v for k, v in docs.items() if k in wanted}
    return [docs[k] for k in sorted(docs)]


# -- references --------------------------------------------------------------

@dataclass(frozen=True)
class ReferenceSet:
    """doc id -> gold keyphrases, each a frozenset of stemmed alternatives."""

    by_doc: Mapping[str, tuple[frozenset[str], ...]]

    def __getitem__(self, doc_id: str) -> tuple[frozenset[str], ...]:
        try:
            return self.by_doc[doc_id]
        except KeyError:
            raise KeyError(f"document {doc_id!r} missing from references") from None

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self.by_doc


def _merge_overlapping(golds: list[set[str]]) -> tuple[frozenset[str], ...]:
    merged: list[set[str]] = []
    for g in golds:
        hits = [m for m in merged if m & g]
        for m in hits:
            g |= m
            merged.remove(m)
        merged.append(g)
    return tuple(frozenset(m) for m in merged)


def parse_reference_line(line: str, stemmed: bool = False) -> tuple[str, tuple[frozenset[str], ...]]:
    doc_id, sep, rest = line.partition(":")
    doc_id = doc_id.strip()
    if not sep or not doc_id:
        raise CorpusFormatError(f"malformed reference line: {line!r}")
    golds = []
    for phrase in rest.split(","):
        alts = set()
        for alt in phrase.split("+"):
            words = alt.split()
            if words:
                alts.add(" ".join(w.lower() for w in words) if stemmed else stem_phrase(words))
        if alts:
            golds.append(alts)
    if not golds:
        raise CorpusFormatError(f"document {doc_id!r} has an empty phrase list")
    return doc_id, _merge_overlapping(golds)


def load_references(path: str | Path, stemmed: bool = False) -> ReferenceSet:
    """Read ``<docid> : phrase,phrase+alt,...`` lines.

    Phrases are restemmed unless ``stemmed`` is set.  Porter is not idempotent,
    so files that already hold Porter stems should be loaded with
    ``stemmed=True``.  Gold phrases sharing an alternative are merged.
    """
    by_doc: dict[str, tuple[frozenset[str], ...]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                doc_id, golds = parse_reference_line(line, stemmed)
            except CorpusFormatError as exc:
                raise CorpusFormatError(f"{path}: line {lineno}: {exc}") from None
            if doc_id in by_doc:
                raise CorpusFormatError(f"{path}: line {lineno}: duplicate document id {doc_id!r}")
            by_doc[doc_id] = golds
    return ReferenceSet(by_doc)


# -- splits ------------------------------------------------------------------

@dataclass(frozen=True)
class Split:
    train: frozenset[str]
    test: frozenset[str]

    def __post_init__(self):
        overlap = self.train & self.test
        if overlap:
            raise CorpusFormatError(f"documents in both train and test: {', '.join(sorted(overlap))}")


def load_split(path: str | Path) -> Split:
    parts: dict[str, frozenset[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            name, sep, ids = line.partition(":")
            name = name.strip()
            if not sep or name not in ("train", "test"):
                raise CorpusFormatError(f"{path}: line {lineno}: expected 'train:' or 'test:'")
            parts[name] = frozenset(i.strip() for i in ids.split(",") if i.strip())
    return Split(parts.get("train", frozenset()), parts.get("test", frozenset()))


def save_split(split: Split, path: str | Path) -> None:
    Path(path).write_text(
        f"train:\t{','.join(sorted(split.train))}\ntest:\t{','.join(sorted(split.test))}\n",
        encoding="utf-8",
    )


# -- document frequency ------------------------------------------------------

@dataclass(frozen=True)
class DfTable:
    n_docs: int
    df: Mapping[str, int]

    def __post_init__(self):
        if self.n_docs <= 0:
            raise ValueError("DfTable needs n_docs > 0")

    def get(self, stem_phrase: str) -> int:
        return self.df.get(stem_phrase, 0)


def doc_ngram_stems(doc: AnnotatedDocument, max_n: int = 3) -> set[str]:
    """Distinct stemmed 1..max_n-grams inside sentences.

    n-grams touching a token with no alphanumeric character are skipped; no
    candidate selector can emit them.
    """
    grams: set[str] = set()
    for sent in doc.sentences:
        stems = [t.stem for t in sent.tokens]
        for i in range(len(stems)):
            for n in range(1, max_n + 1):
                window = stems[i:i + n]
                if len(window) < n or "" in window:
                    break
                grams.add(" ".join(window))
    return grams


def compute_df(train_docs: Sequence[AnnotatedDocument], max_n: int = 3) -> DfTable:
    if not train_docs:
        raise ValueError("empty corpus")
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    df: dict[str, int] = {}
    for doc in train_docs:
        for g in doc_ngram_stems(doc, max_n):
            df[g] = df.get(g, 0) + 1
    return DfTable(len(train_docs), df)


def idf(table: DfTable, stem_phrase: str) -> float:
    return math.log2((table.n_docs + 1) / (table.get(stem_phrase) + 1))


def save_df(table: DfTable, path: str | Path) -> None:
    lines = [f"#docs\t{table.n_docs}"]
    lines.extend(f"{k}\t{table.df[k]}" for k in sorted(table.df))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_df(path: str | Path) -> DfTable:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if len(header) != 2 or header[0] != "#docs":
            raise CorpusFormatError(f"{path}: line 1: expected '#docs<TAB><N>'")
        try:
            n_docs = int(header[1])
        except ValueError:
            raise CorpusFormatError(f"{path}: line 1: bad document count {header[1]!r}") from None
        df = {}
        for lineno, line in enumerate(fh, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            key, sep, count = line.rpartition("\t")
            if not sep:
                raise CorpusFormatError(f"{path}: line {lineno}: expected 'stem<TAB>df'")
            try:
                c = int(count)
            except ValueError:
                raise CorpusFormatError(f"{path}: line {lineno}: bad count {count!r}") from None
            if not 1 <= c <= n_docs:
                raise CorpusFormatError(f"{path}: line {lineno}: df {c} outside 1..{n_docs}")
            df[key] = c
    return DfTable(n_docs, df)
