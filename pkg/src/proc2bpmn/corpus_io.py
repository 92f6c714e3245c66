"""Corpus serialization: native JSONL files and the PET export layout.

Native JSONL holds one document per line::

    {"name": ..., "tokens": [{"text","pos","sentence_id","token_id"}, ...],
     "mentions": [{"type","sentence_id","start","end"}, ...],
     "relations": [{"source","target","type"}, ...]}

A minimal shorthand is accepted on input: ``tokens`` may be a list of bare
strings (one sentence, empty POS) and per-token ``tags`` may replace the
``mentions`` array, in which case spans are recovered by IOB decoding.

The PET adapter reads the published PET JSON layout: an array of per-sentence
records keyed by "document name"/"sentence-ID"/"tokens"/"ner-tags" with an
optional "relations" record of head-word references.
"""
from __future__ import annotations

import json
from pathlib import Path

from .corpus import (
    Corpus,
    Document,
    Mention,
    MentionType,
    ParseError,
    Relation,
    RelationType,
    Token,
    UnknownTagError,
    decode_iob,
    validate_document,
)

FORMATS = ("native-jsonl", "pet-json")

# PET serializes type names with spaces; map onto the canonical enum.
PET_MENTION_NAMES = {
    "Actor": MentionType.ACTOR,
    "Activity": MentionType.ACTIVITY,
    "Activity Data": MentionType.ACTIVITY_DATA,
    "XOR Gateway": MentionType.XOR_GATEWAY,
    "AND Gateway": MentionType.AND_GATEWAY,
    "Further Specification": MentionType.FURTHER_SPECIFICATION,
    "Condition Specification": MentionType.CONDITION_SPECIFICATION,
}

PET_RELATION_NAMES = {
    "flow": RelationType.FLOW,
    "uses": RelationType.USES,
    "actor performer": RelationType.ACTOR_PERFORMER,
    "actor recipient": RelationType.ACTOR_RECIPIENT,
    "further specification": RelationType.FURTHER_SPECIFICATION,
    "same gateway": RelationType.SAME_GATEWAY,
}


def load_corpus(path, format: str = "native-jsonl", provenance: str | None = None) -> Corpus:
    """Load a corpus file, validating every document invariant."""
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {FORMATS}")
    path = Path(path)
    if format == "pet-json":
        return _load_pet(path, provenance or "PET")
    return _load_native(path, provenance or "native")


def _require(record, key, path, line, kind=None):
    if key not in record:
        raise ParseError(f"missing key {key!r}", path=path, line=line)
    value = record[key]
    if kind is not None and not isinstance(value, kind):
        raise ParseError(
            f"key {key!r} has type {type(value).__name__}, expected {kind.__name__}",
            path=path,
            line=line,
        )
    return value


def _mention_type(name, path, line) -> MentionType:
    try:
        return MentionType(name)
    except ValueError:
        raise UnknownTagError(
            f"{path}:{line}: unknown mention type {name!r}"
        ) from None


def _relation_type(name, path, line) -> RelationType:
    try:
        rtype = RelationType(name)
    except ValueError:
        raise UnknownTagError(
            f"{path}:{line}: unknown relation type {name!r}"
        ) from None
    if rtype is RelationType.NO_RELATION:
        raise UnknownTagError(
            f"{path}:{line}: NoRelation must not appear in gold files"
        )
    return rtype


def _load_native(path: Path, provenance: str) -> Corpus:
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc}", path=path, line=lineno) from None
            docs.append(_native_document(record, path, lineno))
    if not docs:
        raise ParseError("file contains no documents", path=path)
    return Corpus(tuple(docs), (provenance,) * len(docs))


def _native_document(record, path, lineno) -> Document:
    name = _require(record, "name", path, lineno, str)
    raw_tokens = _require(record, "tokens", path, lineno, list)
    tokens = []
    for i, item in enumerate(raw_tokens):
        if isinstance(item, str):
            tokens.append(Token(item, "", 0, i, i))
        elif isinstance(item, dict):
            tokens.append(
                Token(
                    _require(item, "text", path, lineno, str),
                    item.get("pos", ""),
                    _require(item, "sentence_id", path, lineno, int),
                    _require(item, "token_id", path, lineno, int),
                    len(tokens),
                )
            )
        else:
            raise ParseError(f"token {i} is neither string nor object", path=path, line=lineno)

    sentences: list[list[str]] = []
    for tok in tokens:
        while len(sentences) <= tok.sentence_id:
            sentences.append([])
        sentences[tok.sentence_id].append(tok.text)

    if "mentions" in record and "tags" in record:
        raise ParseError("record has both 'mentions' and 'tags'", path=path, line=lineno)
    mentions: list[Mention] = []
    if "tags" in record:
        tags = _require(record, "tags", path, lineno, list)
        if len(tags) != len(tokens):
            raise ParseError(
                f"{len(tags)} tags for {len(tokens)} tokens", path=path, line=lineno
            )
        per_sentence: list[list[str]] = []
        it = iter(tags)
        for sent in sentences:
            per_sentence.append([next(it) for _ in sent])
        mentions = decode_iob(per_sentence, sentences)
    else:
        for mid, m in enumerate(_require(record, "mentions", path, lineno, list)):
            mtype = _mention_type(_require(m, "type", path, lineno, str), path, lineno)
            sid = _require(m, "sentence_id", path, lineno, int)
            start = _require(m, "start", path, lineno, int)
            end = _require(m, "end", path, lineno, int)
            if sid >= len(sentences) or not (0 <= start <= end < len(sentences[sid])):
                raise ParseError(
                    f"mention {mid} span out of bounds in document {name!r}",
                    path=path,
                    line=lineno,
                )
            text = " ".join(sentences[sid][start : end + 1])
            mentions.append(Mention(mid, mtype, sid, start, end, text))

    relations = []
    for r in record.get("relations", []):
        relations.append(
            Relation(
                _require(r, "source", path, lineno, int),
                _require(r, "target", path, lineno, int),
                _relation_type(_require(r, "type", path, lineno, str), path, lineno),
            )
        )
    doc = Document(name, tuple(tokens), tuple(mentions), tuple(relations))
    validate_document(doc)
    return doc


def document_to_record(doc: Document) -> dict:
    return {
        "name": doc.name,
        "tokens": [
            {
                "text": t.text,
                "pos": t.pos,
                "sentence_id": t.sentence_id,
                "token_id": t.token_id,
            }
            for t in doc.tokens
        ],
        "mentions": [
            {
                "type": m.type.value,
                "sentence_id": m.sentence_id,
                "start": m.token_start,
                "end": m.token_end,
            }
            for m in doc.mentions
        ],
        "relations": [
            {"source": r.source, "target": r.target, "type": r.type.value}
            for r in doc.relations
        ],
    }


def save_corpus(corpus: Corpus, path) -> None:
    """Canonical writer: sorted keys, compact separators, one doc per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus:
            fh.write(json.dumps(document_to_record(doc), sort_keys=True,
                                separators=(",", ":")))
            fh.write("\n")


def _load_pet(path: Path, provenance: str) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", path=path) from None
    if not isinstance(data, list):
        raise ParseError("PET export must be a JSON array of sentence records", path=path)

    by_doc: dict[str, list[dict]] = {}
    for idx, rec in enumerate(data):
        name = _require(rec, "document name", path, idx, str)
        by_doc.setdefault(name, []).append(rec)

    docs = []
    for name, records in by_doc.items():
        records.sort(key=lambda r: _require(r, "sentence-ID", path, None, int))
        sentences: list[list[str]] = []
        tag_rows: list[list[str]] = []
        relation_recs = []
        for rec in records:
            sid = rec["sentence-ID"]
            if sid != len(sentences):
                raise ParseError(
                    f"document {name!r}: sentence-ID {sid} out of order", path=path
                )
            toks = _require(rec, "tokens", path, sid, list)
            tags = rec.get("ner-tags", rec.get("ner_tags"))
            if tags is None:
                raise ParseError(f"document {name!r}: missing ner-tags", path=path)
            if len(tags) != len(toks):
                raise ParseError(
                    f"document {name!r} sentence {sid}: "
                    f"{len(tags)} tags for {len(toks)} tokens",
                    path=path,
                )
            sentences.append([str(t) for t in toks])
            tag_rows.append([_canonical_iob(t, path, sid) for t in tags])
            if "relations" in rec:
                relation_recs.append(rec["relations"])

        mentions = decode_iob(tag_rows, sentences)
        span_lookup = {}
        for m in mentions:
            for tid in range(m.token_start, m.token_end + 1):
                span_lookup[(m.sentence_id, tid)] = m.mention_id

        relations = []
        seen = set()
        for rel in relation_recs:
            fields = (
                "source-head-sentence-ID",
                "source-head-word-ID",
                "relation-type",
                "target-head-sentence-ID",
                "target-head-word-ID",
            )
            columns = [_require(rel, f, path, None, list) for f in fields]
            for ssid, swid, rname, tsid, twid in zip(*columns):
                rtype = PET_RELATION_NAMES.get(str(rname).strip().lower())
                if rtype is None:
                    raise UnknownTagError(
                        f"{path}: document {name!r}: unknown relation type {rname!r}"
                    )
                try:
                    src = span_lookup[(ssid, swid)]
                    tgt = span_lookup[(tsid, twid)]
                except KeyError as exc:
                    raise ParseError(
                        f"document {name!r}: relation head {exc} is not inside a mention",
                        path=path,
                    ) from None
                key = (src, tgt, rtype)
                if key not in seen:  # PET repeats relation rows per sentence record
                    seen.add(key)
                    relations.append(Relation(src, tgt, rtype))

        doc = Document.from_sentences(name, sentences)
        doc = Document(name, doc.tokens, tuple(mentions), tuple(relations))
        validate_document(doc)
        docs.append(doc)
    if not docs:
        raise ParseError("file contains no documents", path=path)
    return Corpus(tuple(docs), (provenance,) * len(docs))


def _canonical_iob(tag: str, path, line) -> str:
    """Map a PET tag string ("B-Activity Data") onto the canonical tagset."""
    tag = str(tag)
    if tag == "O":
        return "O"
    prefix, _, name = tag.partition("-")
    if prefix in ("B", "I") and name in PET_MENTION_NAMES:
        return f"{prefix}-{PET_MENTION_NAMES[name].value}"
    if tag in ("B", "I") or not name:
        raise UnknownTagError(f"{path}:{line}: malformed IOB tag {tag!r}")
    raise UnknownTagError(f"{path}:{line}: unknown PET tag {tag!r}")


def corpus_to_pet_records(corpus: Corpus) -> list[dict]:
    """Export a corpus in the PET sentence-record layout (POS is dropped).

    Relation head words follow the PET convention of pointing at the first
    token of each mention; relation rows are attached to the source head's
    sentence record.
    """
    records = []
    for doc in corpus:
        sentences = doc.sentences()
        tag_rows = []
        from .corpus import encode_iob  # local import avoids cycle at module load

        for sid, tags in enumerate(encode_iob(doc)):
            tag_rows.append([_pet_tag(t) for t in tags])
        rel_by_sentence: dict[int, dict[str, list]] = {}
        for r in doc.relations:
            src = doc.mentions[r.source]
            tgt = doc.mentions[r.target]
            bucket = rel_by_sentence.setdefault(
                src.sentence_id,
                {
                    "source-head-sentence-ID": [],
                    "source-head-word-ID": [],
                    "relation-type": [],
                    "target-head-sentence-ID": [],
                    "target-head-word-ID": [],
                },
            )
            bucket["source-head-sentence-ID"].append(src.sentence_id)
            bucket["source-head-word-ID"].append(src.token_start)
            bucket["relation-type"].append(_pet_relation_name(r.type))
            bucket["target-head-sentence-ID"].append(tgt.sentence_id)
            bucket["target-head-word-ID"].append(tgt.token_start)
        for sid, sent in enumerate(sentences):
            rec = {
                "document name": doc.name,
                "sentence-ID": sid,
                "tokens": [t.text for t in sent],
                "ner-tags": tag_rows[sid],
            }
            if sid in rel_by_sentence:
                rec["relations"] = rel_by_sentence[sid]
            records.append(rec)
    return records


def _pet_tag(tag: str) -> str:
    if tag == "O":
        return "O"
    prefix, _, name = tag.partition("-")
    for pet_name, mtype in PET_MENTION_NAMES.items():
        if mtype.value == name:
            return f"{prefix}-{pet_name}"
    raise UnknownTagError(f"unknown IOB tag {tag!r}")


def _pet_relation_name(rtype: RelationType) -> str:
    for name, rt in PET_RELATION_NAMES.items():
        if rt is rtype:
            return name
    raise UnknownTagError(f"relation type {rtype!r} has no PET name")
