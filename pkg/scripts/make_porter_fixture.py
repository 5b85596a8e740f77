"""Regenerate tests/fixtures/porter_voc.tsv.

Vocabulary: every lowercase alphabetic word (length >= 1) found in the text
sources given on the command line.  Expected stems come from NLTK's
PorterStemmer in MARTIN_EXTENSIONS mode, an implementation independent of
kpbench.porter.  NLTK is needed only to run this script.

    python scripts/make_porter_fixture.py SRC... > tests/fixtures/porter_voc.tsv
"""

import re
import sys
from pathlib import Path

from nltk.stem.porter import PorterStemmer

# Examples printed in Porter's description of the algorithm.
SEED = """
caresses ponies ties caress cats feed agreed plastered bled motoring sing
conflated troubled sized hopping tanned falling hissing fizzed failing filing
happy sky relational conditional rational valenci hesitanci digitizer
conformabli radicalli differentli vileli analogousli vietnamization
predication operator feudalism decisiveness hopefulness callousness formaliti
sensitiviti sensibiliti triplicate formative formalize electriciti electrical
hopeful goodness revival allowance inference airliner gyroscopic adjustable
defensible irritant replacement adjustment dependent adoption homologou
communism activate angulariti homologous effective bowdlerize probate rate
cease controll roll generalizations oscillators archaeology geology
""".split()


def main(paths):
    words = set(SEED)
    for p in paths:
        text = Path(p).read_text(encoding="utf-8", errors="ignore")
        words.update(w for w in re.findall(r"[A-Za-z]+", text))
    words = sorted({w.lower() for w in words})
    stemmer = PorterStemmer(mode=PorterStemmer.MARTIN_EXTENSIONS)
    for w in words:
        sys.stdout.write(f"{w}\t{stemmer.stem(w)}\n")


if __name__ == "__main__":
    main(sys.argv[1:])
