"""Raw-text front end: sentence segmentation, tokenization, special-character
stripping and POS tagging for unannotated input.

Annotated corpora carry their own sentence ids and POS columns, so this path
is only exercised when extracting from plain text.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

from .corpus import Corpus, CorpusError, Document, Token

#: Characters removed before labeling; configurable via preprocess.strip_chars.
DEFAULT_STRIP_CHARS = "'-’(&)"

#: Abbreviations whose trailing period never ends a sentence.
ABBREVIATIONS = ("e.g.", "i.e.", "etc.")

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


def segment_and_tokenize(text: str) -> list[list[str]]:
    """Split raw text into sentences of tokens.

    A sentence ends at ".", "?" or "!" followed by whitespace and a capital
    letter, or at end of text.  Stoplisted abbreviations do not split.
    Punctuation marks become separate tokens.
    """
    if not text or not text.strip():
        raise CorpusError("input text is empty")
    text = text.strip()
    boundaries = []
    for i, ch in enumerate(text):
        if ch not in ".?!":
            continue
        head = text[: i + 1].lower()
        if any(
            head.endswith(abbr)
            and (len(head) == len(abbr) or head[-len(abbr) - 1] in " \t\n(")
            for abbr in ABBREVIATIONS
        ):
            continue
        rest = text[i + 1 :]
        stripped = rest.lstrip()
        if not stripped:
            boundaries.append(i)
        elif rest[0].isspace() and stripped[0].isupper():
            boundaries.append(i)
    sentences = []
    start = 0
    for b in boundaries + ([len(text) - 1] if (not boundaries or boundaries[-1] != len(text) - 1) else []):
        chunk = text[start : b + 1].strip()
        if chunk:
            tokens = _TOKEN_RE.findall(chunk)
            if tokens:
                sentences.append(tokens)
        start = b + 1
    return sentences


def strip_special_chars(
    sentences: list[list[str]], chars: str = DEFAULT_STRIP_CHARS
) -> list[list[str]]:
    """Delete the removal-set characters from all tokens.

    Tokens that become empty are dropped; sentences that become empty are
    dropped.  Idempotent.
    """
    table = str.maketrans("", "", chars)
    out = []
    for sent in sentences:
        cleaned = [t.translate(table) for t in sent]
        cleaned = [t for t in cleaned if t]
        if cleaned:
            out.append(cleaned)
    return out


#: Ordered suffix rules; at lookup time the longest matching suffix wins.
DEFAULT_SUFFIX_RULES: tuple[tuple[str, str], ...] = (
    ("ation", "NN"),
    ("ment", "NN"),
    ("ness", "NN"),
    ("ally", "RB"),
    ("ing", "VBG"),
    ("ies", "NNS"),
    ("ive", "JJ"),
    ("ous", "JJ"),
    ("ful", "JJ"),
    ("ble", "JJ"),
    ("ity", "NN"),
    ("ed", "VBD"),
    ("ly", "RB"),
    ("er", "NN"),
    ("es", "VBZ"),
    ("s", "VBZ"),
)

#: Closed-class fallback lexicon used when no annotated corpus is available.
BUNDLED_LEXICON: dict[str, str] = {
    "the": "DT", "a": "DT", "an": "DT", "this": "DT", "that": "DT",
    "these": "DT", "those": "DT", "each": "DT", "every": "DT", "no": "DT",
    "and": "CC", "or": "CC", "but": "CC", "nor": "CC",
    "if": "IN", "when": "IN", "while": "IN", "after": "IN", "before": "IN",
    "because": "IN", "whether": "IN", "of": "IN", "in": "IN", "on": "IN",
    "at": "IN", "by": "IN", "for": "IN", "with": "IN", "from": "IN",
    "into": "IN", "against": "IN", "during": "IN", "until": "IN",
    "he": "PRP", "she": "PRP", "it": "PRP", "they": "PRP", "him": "PRP",
    "her": "PRP", "them": "PRP", "who": "WP", "which": "WDT",
    "his": "PRP$", "its": "PRP$", "their": "PRP$",
    "is": "VBZ", "are": "VBP", "was": "VBD", "were": "VBD", "be": "VB",
    "been": "VBN", "being": "VBG", "has": "VBZ", "have": "VBP", "had": "VBD",
    "will": "MD", "can": "MD", "must": "MD", "may": "MD", "should": "MD",
    "to": "TO", "not": "RB", "then": "RB", "also": "RB", "only": "RB",
    "afterwards": "RB", "next": "RB", "finally": "RB", "subsequently": "RB",
    "first": "RB", "meanwhile": "RB", "simultaneously": "RB", "otherwise": "RB",
    "there": "EX", "as": "IN", "once": "IN", "so": "RB", "up": "RP",
    "out": "RP", "off": "RP", "all": "DT", "any": "DT", "same": "JJ",
    "new": "JJ", "available": "JJ", "necessary": "JJ", "complete": "JJ",
    ".": ".", ",": ",", ";": ":", ":": ":", "?": ".", "!": ".",
}


@dataclass(frozen=True)
class PosTagger:
    """Lexicon + suffix-rule tagger.  Lookup order: lexicon, then the longest
    matching suffix rule, then the default tag."""

    lexicon: dict[str, str]
    suffix_rules: tuple[tuple[str, str], ...] = DEFAULT_SUFFIX_RULES
    default: str = "NN"

    def tag(self, word: str) -> str:
        hit = self.lexicon.get(word.lower())
        if hit is not None:
            return hit
        best = None
        for suffix, tag in self.suffix_rules:
            if word.lower().endswith(suffix):
                if best is None or len(suffix) > len(best[0]):
                    best = (suffix, tag)
        if best is not None:
            return best[1]
        return self.default


def pos_tag(sentence: list[str], tagger: PosTagger) -> list[str]:
    return [tagger.tag(w) for w in sentence]


def build_tagger(corpus: Corpus | None = None) -> PosTagger:
    """Build a tagger from the POS column of a corpus, or fall back to the
    bundled closed-class lexicon.

    Per-word ties are broken by tag frequency, then lexicographically, so the
    result is deterministic.
    """
    if corpus is None:
        return PosTagger(dict(BUNDLED_LEXICON))
    counts: dict[str, Counter] = {}
    for doc in corpus:
        for tok in doc.tokens:
            if tok.pos:
                counts.setdefault(tok.text.lower(), Counter())[tok.pos] += 1
    if not counts:
        return PosTagger(dict(BUNDLED_LEXICON))
    lexicon = dict(BUNDLED_LEXICON)
    for word, tags in counts.items():
        best = max(sorted(tags.items()), key=lambda kv: kv[1])
        lexicon[word] = best[0]
    return PosTagger(lexicon)


def pos_tag_corpus(corpus: Corpus, tagger: PosTagger) -> Corpus:
    """Fill empty POS fields (e.g. after loading a PET export)."""
    docs = []
    for doc in corpus:
        tokens = tuple(
            tok if tok.pos else Token(tok.text, tagger.tag(tok.text),
                                      tok.sentence_id, tok.token_id, tok.global_id)
            for tok in doc.tokens
        )
        docs.append(Document(doc.name, tokens, doc.mentions, doc.relations))
    return Corpus(tuple(docs), corpus.provenance)


def document_from_text(name: str, text: str, tagger: PosTagger,
                       strip_chars: str = DEFAULT_STRIP_CHARS) -> Document:
    """Full raw-text front end: segment, tokenize, strip, POS-tag."""
    sentences = strip_special_chars(segment_and_tokenize(text), strip_chars)
    if not sentences:
        raise CorpusError("no tokens left after preprocessing")
    pos = [pos_tag(sent, tagger) for sent in sentences]
    return Document.from_sentences(name, sentences, pos)
