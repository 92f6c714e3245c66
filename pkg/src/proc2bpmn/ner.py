"""Sequence labeling over the 15-tag IOB tagset with a linear-chain CRF.

Feature extraction produces sparse string-keyed features per token; training
builds a feature vocabulary, packs the data and minimizes the regularized
negative log-likelihood (see :mod:`proc2bpmn.crf`).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import crf
from .corpus import (
    Corpus,
    DataError,
    Document,
    IOB_TAGS,
    Mention,
    TAG_INDEX,
    Token,
    decode_iob,
    encode_iob,
)


class ModelError(DataError):
    """Model file missing, malformed, or incompatible with the tagset."""


def extract_features(
    sentence: list[Token],
    embeddings: dict[str, np.ndarray] | None = None,
) -> list[dict[str, float]]:
    """Per-token feature maps for one sentence.

    Binary features carry value 1.0.  Window features (-1:/+1:) are replaced
    by BOS/EOS markers at the sequence edges.  When an embedding table is
    given, each token additionally gets dense "emb[i]" features from a
    lowercased lookup; out-of-vocabulary words contribute none.
    """
    feats: list[dict[str, float]] = []
    n = len(sentence)
    for i, tok in enumerate(sentence):
        word = tok.text
        f: dict[str, float] = {"bias": 1.0}
        f[f"lower={word.lower()}"] = 1.0
        f[f"suffix2={word[-2:].lower()}"] = 1.0
        f[f"suffix3={word[-3:].lower()}"] = 1.0
        if word.isupper():
            f["isupper"] = 1.0
        if word.istitle():
            f["istitle"] = 1.0
        if word.isdigit():
            f["isdigit"] = 1.0
        if tok.pos:
            f[f"pos={tok.pos}"] = 1.0
        if i == 0:
            f["BOS"] = 1.0
        else:
            prev = sentence[i - 1]
            f[f"-1:lower={prev.text.lower()}"] = 1.0
            if prev.text.istitle():
                f["-1:istitle"] = 1.0
            if prev.pos:
                f[f"-1:pos={prev.pos}"] = 1.0
        if i == n - 1:
            f["EOS"] = 1.0
        else:
            nxt = sentence[i + 1]
            f[f"+1:lower={nxt.text.lower()}"] = 1.0
            if nxt.text.istitle():
                f["+1:istitle"] = 1.0
            if nxt.pos:
                f[f"+1:pos={nxt.pos}"] = 1.0
        if embeddings is not None:
            vec = embeddings.get(word.lower())
            if vec is not None:
                for j, value in enumerate(vec):
                    if value != 0.0:
                        f[f"emb[{j}]"] = float(value)
        feats.append(f)
    return feats


def load_embeddings(path) -> dict[str, np.ndarray]:
    """Read a word-vector table: one token per line, then its components."""
    table: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            if len(parts) < 2:
                raise ModelError(f"{path}:{lineno}: embedding line has no values")
            try:
                table[parts[0]] = np.array([float(x) for x in parts[1:]])
            except ValueError:
                raise ModelError(f"{path}:{lineno}: non-numeric embedding value") from None
    return table


@dataclass
class TrainConfig:
    l2: float = 0.1
    max_iter: int = 100
    tol: float = 1e-4
    optimizer: str = "lbfgs"  # or "gd" (first-order with step adaptation)
    seed: int = 0

    def __post_init__(self):
        if self.l2 < 0:
            raise ValueError("l2 strength must be nonnegative")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass
class CrfModel:
    feature_vocab: dict[str, int]
    emissions: np.ndarray  # (n_features, 15)
    transitions: np.ndarray  # (15, 15)
    l2: float
    tags: tuple[str, ...] = IOB_TAGS
    pos_lexicon: dict[str, str] = field(default_factory=dict)

    def index_sentence(self, feats: list[dict[str, float]]):
        """Map feature dicts to (index, value) arrays, dropping unknown keys."""
        out = []
        for f in feats:
            idx, val = [], []
            for k, v in f.items():
                j = self.feature_vocab.get(k)
                if j is not None:
                    idx.append(j)
                    val.append(v)
            out.append((np.asarray(idx, dtype=np.int64), np.asarray(val, dtype=np.float64)))
        return out

    def _emissions_for(self, feats: list[dict[str, float]]) -> np.ndarray:
        emis = np.zeros((len(feats), len(self.tags)))
        for t, (idx, val) in enumerate(self.index_sentence(feats)):
            if len(idx):
                emis[t] = val @ self.emissions[idx]
        return emis


def viterbi_decode(model: CrfModel, features: list[dict[str, float]]) -> list[str]:
    """Argmax tag sequence; ties break to the fixed tag order (O first)."""
    if not features:
        return []
    emis = model._emissions_for(features)
    path, _ = crf.viterbi(emis, model.transitions)
    return [model.tags[i] for i in path]


def crf_objective(
    model: CrfModel,
    data: list[tuple[list[dict[str, float]], list[str]]],
) -> tuple[float, dict]:
    """Regularized NLL and gradient for labeled data under an existing model.

    Returned gradient maps are keyed ("emissions", "transitions") with arrays
    shaped like the model weights.
    """
    packed = _pack_with_vocab(data, model.feature_vocab, model.tags)
    params = np.concatenate([model.emissions.ravel(), model.transitions.ravel()])
    nll, grad = crf.objective(params, packed, model.l2)
    F, Y = model.emissions.shape
    return nll, {
        "emissions": grad[: F * Y].reshape(F, Y),
        "transitions": grad[F * Y :].reshape(Y, Y),
    }


def _pack_with_vocab(data, vocab, tags):
    indexed, labels = [], []
    tag_index = {t: i for i, t in enumerate(tags)}
    for feats, tag_seq in data:
        if len(feats) != len(tag_seq):
            raise ValueError("feature/label sequence length mismatch")
        seq = []
        for f in feats:
            idx, val = [], []
            for k, v in f.items():
                j = vocab.get(k)
                if j is not None:
                    idx.append(j)
                    val.append(v)
            seq.append((np.asarray(idx, dtype=np.int64), np.asarray(val, dtype=np.float64)))
        indexed.append(seq)
        labels.append([tag_index[t] for t in tag_seq])
    return crf.pack(indexed, labels, len(vocab), len(tags))


def build_vocab(data) -> dict[str, int]:
    vocab: dict[str, int] = {}
    for feats, _ in data:
        for f in feats:
            for k in f:
                if k not in vocab:
                    vocab[k] = len(vocab)
    return vocab


def train_crf(
    data: list[tuple[list[dict[str, float]], list[str]]],
    cfg: TrainConfig | None = None,
    pos_lexicon: dict[str, str] | None = None,
) -> tuple[CrfModel, crf.TrainResult]:
    """Maximum-likelihood training; deterministic given the config.

    Returns the fitted model together with the optimizer trace.
    """
    if not data:
        raise DataError("cannot train a CRF on empty data")
    cfg = cfg or TrainConfig()
    vocab = build_vocab(data)
    packed = _pack_with_vocab(data, vocab, IOB_TAGS)
    result = crf.minimize_objective(packed, cfg.l2, cfg.max_iter, cfg.tol, cfg.optimizer)
    F, Y = len(vocab), len(IOB_TAGS)
    model = CrfModel(
        feature_vocab=vocab,
        emissions=result.params[: F * Y].reshape(F, Y),
        transitions=result.params[F * Y :].reshape(Y, Y),
        l2=cfg.l2,
        pos_lexicon=dict(pos_lexicon or {}),
    )
    return model, result


def featurize_corpus(
    corpus: Corpus, embeddings: dict[str, np.ndarray] | None = None
) -> list[tuple[list[dict[str, float]], list[str]]]:
    """(features, gold IOB tags) pairs for every sentence of a corpus."""
    data = []
    for doc in corpus:
        tags = encode_iob(doc)
        for sid, sent in enumerate(doc.sentences()):
            data.append((extract_features(sent, embeddings), tags[sid]))
    return data


def tag_document(
    model: CrfModel,
    doc: Document,
    embeddings: dict[str, np.ndarray] | None = None,
) -> list[list[str]]:
    return [
        viterbi_decode(model, extract_features(sent, embeddings))
        for sent in doc.sentences()
    ]


def predict_mentions(
    model: CrfModel,
    doc: Document,
    embeddings: dict[str, np.ndarray] | None = None,
) -> list[Mention]:
    tags = tag_document(model, doc, embeddings)
    sentences = [[t.text for t in sent] for sent in doc.sentences()]
    return decode_iob(tags, sentences)


MODEL_FORMAT = "proc2bpmn-crf"
MODEL_VERSION = 1


def save_model(model: CrfModel, path) -> None:
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "tags": list(model.tags),
        "l2": model.l2,
        "feature_vocab": model.feature_vocab,
        "emissions": model.emissions.tolist(),
        "transitions": model.transitions.tolist(),
        "pos_lexicon": model.pos_lexicon,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


def load_model(path) -> CrfModel:
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: invalid model file: {exc}") from None
    if payload.get("format") != MODEL_FORMAT:
        raise ModelError(f"{path}: not a {MODEL_FORMAT} file")
    if payload.get("version") != MODEL_VERSION:
        raise ModelError(f"{path}: unsupported model version {payload.get('version')}")
    tags = tuple(payload["tags"])
    if len(tags) != len(IOB_TAGS):
        raise ModelError(
            f"{path}: model has {len(tags)} tags, expected {len(IOB_TAGS)}"
        )
    if tags != IOB_TAGS:
        raise ModelError(f"{path}: tag order does not match the current tagset")
    emissions = np.asarray(payload["emissions"], dtype=np.float64)
    transitions = np.asarray(payload["transitions"], dtype=np.float64)
    vocab = {str(k): int(v) for k, v in payload["feature_vocab"].items()}
    if emissions.shape != (len(vocab), len(tags)) or transitions.shape != (len(tags), len(tags)):
        raise ModelError(f"{path}: weight shapes do not match vocabulary/tagset")
    return CrfModel(vocab, emissions, transitions, float(payload.get("l2", 0.1)),
                    tags, dict(payload.get("pos_lexicon", {})))
