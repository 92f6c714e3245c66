"""Data model for annotated process-description corpora.

Documents are token sequences with typed mention spans and typed directed
relations between mentions.  IOB tag sequences are a serialization view of
the mention spans; the span representation is primary.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from typing import Iterable, Sequence


class DataError(Exception):
    """Base class for errors caused by bad input data or model files."""


class CorpusError(DataError):
    pass


class ParseError(CorpusError):
    """Malformed corpus file; carries a locus (path, line/record)."""

    def __init__(self, message, path=None, line=None):
        locus = ""
        if path is not None:
            locus = f"{path}"
            if line is not None:
                locus += f":{line}"
            locus += ": "
        super().__init__(locus + message)
        self.path = path
        self.line = line


class InvariantError(CorpusError):
    """A document violates a structural invariant."""


class UnknownTagError(CorpusError):
    """An IOB tag, mention type or relation type outside the closed sets."""


class MentionType(str, Enum):
    ACTOR = "Actor"
    ACTIVITY = "Activity"
    ACTIVITY_DATA = "ActivityData"
    XOR_GATEWAY = "XorGateway"
    AND_GATEWAY = "AndGateway"
    FURTHER_SPECIFICATION = "FurtherSpecification"
    CONDITION_SPECIFICATION = "ConditionSpecification"

    def __str__(self):
        return self.value


class RelationType(str, Enum):
    FLOW = "Flow"
    USES = "Uses"
    ACTOR_PERFORMER = "ActorPerformer"
    ACTOR_RECIPIENT = "ActorRecipient"
    FURTHER_SPECIFICATION = "FurtherSpecification"
    SAME_GATEWAY = "SameGateway"
    NO_RELATION = "NoRelation"

    def __str__(self):
        return self.value


#: Relation types that may appear in gold annotation files (NoRelation is a
#: classifier-internal label, never serialized).
GOLD_RELATION_TYPES = tuple(t for t in RelationType if t is not RelationType.NO_RELATION)

#: The 15-tag IOB tagset, in the fixed order used for Viterbi tie-breaking:
#: O first, then B-/I- per mention type in declaration order.
IOB_TAGS: tuple[str, ...] = ("O",) + tuple(
    f"{prefix}-{mtype.value}" for mtype in MentionType for prefix in ("B", "I")
)

TAG_INDEX: dict[str, int] = {tag: i for i, tag in enumerate(IOB_TAGS)}


def parse_iob(tag: str) -> tuple[str, MentionType | None]:
    """Split an IOB tag string into (prefix, mention type).

    Returns ("O", None) for the outside tag; raises UnknownTagError for
    anything outside the 15-tag set.
    """
    if tag == "O":
        return "O", None
    if tag not in TAG_INDEX:
        raise UnknownTagError(f"unknown IOB tag {tag!r}")
    prefix, _, name = tag.partition("-")
    return prefix, MentionType(name)


@dataclass(frozen=True)
class Token:
    text: str
    pos: str
    sentence_id: int
    token_id: int
    global_id: int


@dataclass(frozen=True)
class Mention:
    mention_id: int
    type: MentionType
    sentence_id: int
    token_start: int
    token_end: int  # inclusive
    text: str

    @property
    def span(self) -> tuple[int, int, int]:
        return (self.sentence_id, self.token_start, self.token_end)


@dataclass(frozen=True)
class Relation:
    source: int
    target: int
    type: RelationType


@dataclass(frozen=True)
class Document:
    name: str
    tokens: tuple[Token, ...]
    mentions: tuple[Mention, ...]
    relations: tuple[Relation, ...]

    def sentences(self) -> list[list[Token]]:
        out: list[list[Token]] = []
        for tok in self.tokens:
            while len(out) <= tok.sentence_id:
                out.append([])
            out[tok.sentence_id].append(tok)
        return out

    def sentence_count(self) -> int:
        return self.tokens[-1].sentence_id + 1 if self.tokens else 0

    def mention_tokens(self, mention: Mention) -> list[Token]:
        sent = self.sentences()[mention.sentence_id]
        return sent[mention.token_start : mention.token_end + 1]

    @staticmethod
    def from_sentences(
        name: str,
        sentences: Sequence[Sequence[str]],
        pos: Sequence[Sequence[str]] | None = None,
        mentions: Iterable[tuple[MentionType, int, int, int]] = (),
        relations: Iterable[tuple[int, int, RelationType]] = (),
    ) -> "Document":
        """Build a document from sentence token texts and span tuples.

        ``mentions`` entries are (type, sentence_id, start, end); mention ids
        are assigned in the given order and mention text is derived from the
        tokens.
        """
        tokens = []
        gid = 0
        for sid, sent in enumerate(sentences):
            for tid, text in enumerate(sent):
                tag = pos[sid][tid] if pos is not None else ""
                tokens.append(Token(text, tag, sid, tid, gid))
                gid += 1
        ments = []
        for mid, (mtype, sid, start, end) in enumerate(mentions):
            text = " ".join(sentences[sid][start : end + 1])
            ments.append(Mention(mid, mtype, sid, start, end, text))
        rels = tuple(Relation(s, t, rt) for s, t, rt in relations)
        doc = Document(name, tuple(tokens), tuple(ments), rels)
        validate_document(doc)
        return doc


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.provenance:
            object.__setattr__(self, "provenance", ("native",) * len(self.documents))
        if len(self.provenance) != len(self.documents):
            raise InvariantError("provenance list length must match document count")
        names = [d.name for d in self.documents]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise InvariantError(f"duplicate document names: {dupes}")

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)


def merge_corpora(*corpora: Corpus) -> Corpus:
    docs: list[Document] = []
    prov: list[str] = []
    for c in corpora:
        docs.extend(c.documents)
        prov.extend(c.provenance)
    return Corpus(tuple(docs), tuple(prov))


def validate_document(doc: Document) -> None:
    """Check all structural invariants; raise InvariantError naming the locus."""

    def fail(msg):
        raise InvariantError(f"document {doc.name!r}: {msg}")

    prev = None
    for tok in doc.tokens:
        if not tok.text:
            fail(f"empty token text at global_id {tok.global_id}")
        if prev is not None:
            if tok.global_id != prev.global_id + 1:
                fail(f"global_id not strictly increasing at {tok.global_id}")
            if tok.sentence_id == prev.sentence_id:
                if tok.token_id != prev.token_id + 1:
                    fail(f"token_id gap in sentence {tok.sentence_id}")
            elif tok.sentence_id == prev.sentence_id + 1:
                if tok.token_id != 0:
                    fail(f"sentence {tok.sentence_id} does not start at token 0")
            else:
                fail(f"sentence_id jump at global_id {tok.global_id}")
        else:
            if tok.global_id != 0 or tok.sentence_id != 0 or tok.token_id != 0:
                fail("first token must have sentence_id=token_id=global_id=0")
        prev = tok

    sentences = doc.sentences()
    claimed: dict[tuple[int, int], int] = {}
    for m in doc.mentions:
        if m.mention_id >= len(doc.mentions) or doc.mentions[m.mention_id] is not m:
            fail(f"mention ids must be 0..n-1 in order (mention {m.mention_id})")
        if m.sentence_id >= len(sentences):
            fail(f"mention {m.mention_id} references missing sentence {m.sentence_id}")
        sent = sentences[m.sentence_id]
        if not (0 <= m.token_start <= m.token_end < len(sent)):
            fail(f"mention {m.mention_id} span out of sentence bounds")
        text = " ".join(t.text for t in sent[m.token_start : m.token_end + 1])
        if m.text != text:
            fail(f"mention {m.mention_id} text {m.text!r} != tokens {text!r}")
        for tid in range(m.token_start, m.token_end + 1):
            key = (m.sentence_id, tid)
            if key in claimed:
                fail(f"mentions {claimed[key]} and {m.mention_id} overlap at {key}")
            claimed[key] = m.mention_id

    for i, r in enumerate(doc.relations):
        for end in (r.source, r.target):
            if not (0 <= end < len(doc.mentions)):
                fail(f"relation {i} references missing mention {end}")
        if r.source == r.target:
            fail(f"relation {i} is a self-loop on mention {r.source}")


def encode_iob(doc: Document) -> list[list[str]]:
    """Per-sentence IOB tag sequences for a document's mentions."""
    tags = [["O"] * len(sent) for sent in doc.sentences()]
    for m in doc.mentions:
        tags[m.sentence_id][m.token_start] = f"B-{m.type.value}"
        for tid in range(m.token_start + 1, m.token_end + 1):
            tags[m.sentence_id][tid] = f"I-{m.type.value}"
    return tags


def decode_iob(
    tag_sequences: Sequence[Sequence[str]],
    sentences: Sequence[Sequence[str]] | None = None,
) -> list[Mention]:
    """Decode IOB tag sequences into mention spans.

    Repair rules: an I-X with no live run of type X starts a new mention
    (treated as B-X); an I-Y following a run of a different type starts a
    new mention of Y.  Every tag sequence is therefore decodable.

    Mention text is filled from ``sentences`` when given, else left empty.
    """
    mentions: list[Mention] = []
    spans: list[tuple[MentionType, int, int, int]] = []
    for sid, tags in enumerate(tag_sequences):
        run_type: MentionType | None = None
        run_start = 0
        for tid, tag in enumerate(tags):
            prefix, mtype = parse_iob(tag)
            if prefix == "O":
                if run_type is not None:
                    spans.append((run_type, sid, run_start, tid - 1))
                    run_type = None
            elif prefix == "B" or mtype is not run_type:
                if run_type is not None:
                    spans.append((run_type, sid, run_start, tid - 1))
                run_type = mtype
                run_start = tid
        if run_type is not None:
            spans.append((run_type, sid, run_start, len(tags) - 1))
    for mid, (mtype, sid, start, end) in enumerate(spans):
        text = ""
        if sentences is not None:
            text = " ".join(sentences[sid][start : end + 1])
        mentions.append(Mention(mid, mtype, sid, start, end, text))
    return mentions


def _round2(value: Decimal) -> Decimal:
    return value.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)


@dataclass(frozen=True)
class StatsRow:
    absolute: int
    relative: Decimal  # percent, 2 decimals, half-up
    per_document: Decimal
    per_sentence: Decimal


@dataclass(frozen=True)
class StatsTable:
    rows: dict[MentionType, StatsRow]
    documents: int
    sentences: int
    mentions: int
    tokens: int


def corpus_stats(corpus: Corpus) -> StatsTable:
    """Mention-type statistics table: absolute/relative counts and means.

    Relative counts are percentages of all mentions; all derived figures are
    rounded half-up to 2 decimals so published tables compare bit-exactly.
    """
    if not corpus.documents:
        raise CorpusError("cannot compute statistics of an empty corpus")
    counts = {t: 0 for t in MentionType}
    for doc in corpus:
        for m in doc.mentions:
            counts[m.type] += 1
    total = sum(counts.values())
    if total == 0:
        raise CorpusError("corpus contains no mentions")
    n_docs = len(corpus.documents)
    n_sents = sum(d.sentence_count() for d in corpus)
    n_tokens = sum(len(d.tokens) for d in corpus)
    rows = {}
    for t in MentionType:
        c = Decimal(counts[t])
        rows[t] = StatsRow(
            absolute=counts[t],
            relative=_round2(c * 100 / Decimal(total)),
            per_document=_round2(c / Decimal(n_docs)),
            per_sentence=_round2(c / Decimal(n_sents)),
        )
    return StatsTable(rows, n_docs, n_sents, total, n_tokens)


def format_stats_table(stats: StatsTable) -> str:
    """Render a StatsTable in the measure-by-type layout of published tables."""
    types = list(MentionType)
    header = [""] + [t.value for t in types]
    lines = [
        ["absolute count"] + [str(stats.rows[t].absolute) for t in types],
        ["relative count"] + [f"{stats.rows[t].relative}%" for t in types],
        ["per document"] + [str(stats.rows[t].per_document) for t in types],
        ["per sentence"] + [str(stats.rows[t].per_sentence) for t in types],
    ]
    widths = [max(len(row[i]) for row in [header] + lines) for i in range(len(header))]
    out = []
    for row in [header] + lines:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    out.append(
        f"documents: {stats.documents}  sentences: {stats.sentences}  "
        f"mentions: {stats.mentions}  tokens: {stats.tokens}"
    )
    return "\n".join(out)


def kfold_split(corpus: Corpus, k: int, seed: int) -> list[tuple[Corpus, Corpus]]:
    """Document-level k-fold partition, deterministic in ``seed``.

    Test fold sizes differ by at most one; every document lands in exactly
    one test fold.
    """
    n = len(corpus.documents)
    if k < 1:
        raise ValueError("k must be positive")
    if k > n:
        raise CorpusError(f"cannot split {n} documents into {k} folds")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    base, extra = divmod(n, k)
    folds = []
    pos = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        test_idx = set(order[pos : pos + size])
        pos += size
        train_docs = [corpus.documents[j] for j in range(n) if j not in test_idx]
        train_prov = [corpus.provenance[j] for j in range(n) if j not in test_idx]
        test_docs = [corpus.documents[j] for j in range(n) if j in test_idx]
        test_prov = [corpus.provenance[j] for j in range(n) if j in test_idx]
        folds.append(
            (Corpus(tuple(train_docs), tuple(train_prov)),
             Corpus(tuple(test_docs), tuple(test_prov)))
        )
    return folds
