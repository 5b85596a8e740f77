"""Keyphrase extraction benchmark toolkit.

Preprocessing levels for annotated scientific articles, five keyphrase
extraction models (TF x IDF, Kea, TopicRank, KP-Miner, WINGNUS) and
SemEval-style evaluation.
"""

from .corpus import (AnnotatedDocument, DfTable, ReferenceSet, Section, Split, compute_df, idf,
                     load_corpus, load_df, load_document, load_references, load_split, save_df,
                     save_document)
from .textcore import Sentence, Stopwords, Token, english_stopwords, is_punct_word, stem_phrase, stem_word

__version__ = "0.1.0"
