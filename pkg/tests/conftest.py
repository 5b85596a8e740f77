from pathlib import Path

import pytest

from kpbench.corpus import AnnotatedDocument, load_corpus, load_references, load_split
from kpbench.textcore import Token

FIXTURES = Path(__file__).parent / "fixtures"


def tagged(text):
    """'Grid/NN services/NNS' -> list of Tokens."""
    out = []
    for item in text.split():
        surface, _, pos = item.rpartition("/")
        out.append(Token(surface, pos))
    return out


def make_doc(*sections, doc_id="D", level=1):
    """make_doc(("title", ["a/DT b/NN"]), ("body", [...]))"""
    return AnnotatedDocument.build(doc_id, [(k, [tagged(s) for s in sents]) for k, sents in sections], level)


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(FIXTURES / "corpus")


@pytest.fixture(scope="session")
def refs():
    return load_references(FIXTURES / "references.txt")


@pytest.fixture(scope="session")
def split():
    return load_split(FIXTURES / "split.txt")
