"""proc2bpmn: BPMN process model extraction from annotated text.

Pipeline: preprocessing -> CRF sequence labeling -> mention-pair relation
classification -> entity resolution -> BPMN graph assembly and DOT output.
"""

__version__ = "0.1.0"

from .corpus import (
    Corpus,
    CorpusError,
    DataError,
    Document,
    IOB_TAGS,
    InvariantError,
    Mention,
    MentionType,
    ParseError,
    Relation,
    RelationType,
    Token,
    UnknownTagError,
    corpus_stats,
    decode_iob,
    encode_iob,
    kfold_split,
    merge_corpora,
)
from .corpus_io import load_corpus, save_corpus

__all__ = [
    "Corpus",
    "CorpusError",
    "DataError",
    "Document",
    "IOB_TAGS",
    "InvariantError",
    "Mention",
    "MentionType",
    "ParseError",
    "Relation",
    "RelationType",
    "Token",
    "UnknownTagError",
    "corpus_stats",
    "decode_iob",
    "encode_iob",
    "kfold_split",
    "load_corpus",
    "merge_corpora",
    "save_corpus",
    "__version__",
]
