"""Mention-pair relation extraction.

Every ordered mention pair in a document becomes a feature frame; sampling
strategies rebalance the frames; a pluggable classifier assigns one of the
relation types (or NoRelation).  The reference classifier is multinomial
logistic regression over one-hot categorical features plus standardized
numeric distances, trained with seeded mini-batch gradient descent.
"""
from __future__ import annotations

import abc
import csv
import json
import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .corpus import (
    DataError,
    Document,
    Mention,
    MentionType,
    Relation,
    RelationType,
)


class RelexError(DataError):
    pass


NONE_SENTINEL = "NONE"

#: Fixed CSV column order for frame export.
FRAME_COLUMNS = (
    "source_mention_id",
    "target_mention_id",
    "source_text",
    "source_type",
    "source_pos",
    "source_sentence_id",
    "source_token_id",
    "source_prev_type",
    "source_next_type",
    "target_text",
    "target_type",
    "target_pos",
    "target_sentence_id",
    "target_token_id",
    "target_prev_type",
    "target_next_type",
    "token_distance",
    "sentence_distance",
    "dependency_tag",
    "label",
)

CATEGORICAL_COLUMNS = (
    "source_text",
    "source_type",
    "source_pos",
    "source_prev_type",
    "source_next_type",
    "target_text",
    "target_type",
    "target_pos",
    "target_prev_type",
    "target_next_type",
    "dependency_tag",
)

NUMERIC_COLUMNS = (
    "source_sentence_id",
    "source_token_id",
    "target_sentence_id",
    "target_token_id",
    "token_distance",
    "sentence_distance",
)


@dataclass(frozen=True)
class MentionPairFrame:
    source_mention_id: int
    target_mention_id: int
    source_text: str
    source_type: str
    source_pos: str
    source_sentence_id: int
    source_token_id: int
    source_prev_type: str
    source_next_type: str
    target_text: str
    target_type: str
    target_pos: str
    target_sentence_id: int
    target_token_id: int
    target_prev_type: str
    target_next_type: str
    token_distance: int
    sentence_distance: int
    dependency_tag: str
    label: RelationType


# --- sampling strategies -------------------------------------------------


@dataclass(frozen=True)
class NoSampling:
    pass


@dataclass(frozen=True)
class NegativeSampling:
    rate: float
    seed: int = 0

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError("negative sampling rate must be positive")


@dataclass(frozen=True)
class RandomOverSampling:
    target: RelationType = RelationType.FLOW
    multiplier: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.multiplier < 1:
            raise ValueError("oversampling multiplier must be >= 1")


SamplingStrategy = NoSampling | NegativeSampling | RandomOverSampling


def apply_sampling(frames: list[MentionPairFrame], strategy: SamplingStrategy) -> list[MentionPairFrame]:
    """Rebalance frames; only multiplicity changes, never frame contents.

    NegativeSampling keeps all positive frames and subsamples NoRelation
    frames without replacement to ceil(rate * #positives).  ROS duplicates
    target-class frames with replacement until the class count reaches
    ceil(multiplier * original); other classes are untouched.
    """
    if not frames:
        raise RelexError("cannot sample an empty frame list")
    if isinstance(strategy, NoSampling):
        return list(frames)
    if isinstance(strategy, NegativeSampling):
        positives = [f for f in frames if f.label is not RelationType.NO_RELATION]
        if not positives:
            raise RelexError("negative sampling requires at least one positive frame")
        neg_idx = [i for i, f in enumerate(frames) if f.label is RelationType.NO_RELATION]
        want = min(len(neg_idx), math.ceil(strategy.rate * len(positives)))
        rng = np.random.default_rng(strategy.seed)
        keep = set(rng.choice(len(neg_idx), size=want, replace=False).tolist()) if want else set()
        kept_neg = {neg_idx[i] for i in keep}
        return [
            f
            for i, f in enumerate(frames)
            if f.label is not RelationType.NO_RELATION or i in kept_neg
        ]
    if isinstance(strategy, RandomOverSampling):
        targets = [f for f in frames if f.label is strategy.target]
        want = math.ceil(strategy.multiplier * len(targets))
        extra = want - len(targets)
        out = list(frames)
        if extra > 0 and targets:
            rng = np.random.default_rng(strategy.seed)
            picks = rng.integers(0, len(targets), size=extra)
            out.extend(targets[i] for i in picks)
        return out
    raise TypeError(f"unknown sampling strategy {strategy!r}")


# --- frame construction ---------------------------------------------------


def build_pair_frames(
    document: Document,
    mentions: list[Mention],
    relations: list[Relation] | None = None,
    head: str = "last",
    neighbors: str = "mention",
) -> list[MentionPairFrame]:
    """All ordered mention pairs of a document as labeled feature frames.

    ``relations`` supplies gold labels (pairs not covered become NoRelation);
    pass None when building frames for prediction.  The head token of a span
    is its last token by default (``head="first"`` switches).  The prev/next
    slots hold the types of the neighboring mentions in document order
    (``neighbors="mention"``) or the POS tags of the tokens flanking the span
    (``neighbors="pos"``).
    """
    if head not in ("first", "last"):
        raise ValueError("head must be 'first' or 'last'")
    if neighbors not in ("mention", "pos"):
        raise ValueError("neighbors must be 'mention' or 'pos'")
    ordered = sorted(mentions, key=lambda m: (m.sentence_id, m.token_start))
    sentences = document.sentences()
    label_of = {}
    for r in relations if relations is not None else ():
        label_of[(r.source, r.target)] = r.type

    position = {m.mention_id: i for i, m in enumerate(ordered)}

    def head_token(m: Mention):
        sent = sentences[m.sentence_id]
        tid = m.token_end if head == "last" else m.token_start
        return sent[tid]

    def neighbor_type(m: Mention, offset: int) -> str:
        if neighbors == "pos":
            sent = sentences[m.sentence_id]
            tid = m.token_start - 1 if offset < 0 else m.token_end + 1
            if 0 <= tid < len(sent):
                return sent[tid].pos or NONE_SENTINEL
            return NONE_SENTINEL
        i = position[m.mention_id] + offset
        if 0 <= i < len(ordered):
            return ordered[i].type.value
        return NONE_SENTINEL

    frames = []
    for src in ordered:
        st = head_token(src)
        for tgt in ordered:
            if src.mention_id == tgt.mention_id:
                continue
            tt = head_token(tgt)
            frames.append(
                MentionPairFrame(
                    source_mention_id=src.mention_id,
                    target_mention_id=tgt.mention_id,
                    source_text=st.text.lower(),
                    source_type=src.type.value,
                    source_pos=st.pos or NONE_SENTINEL,
                    source_sentence_id=src.sentence_id,
                    source_token_id=st.token_id,
                    source_prev_type=neighbor_type(src, -1),
                    source_next_type=neighbor_type(src, +1),
                    target_text=tt.text.lower(),
                    target_type=tgt.type.value,
                    target_pos=tt.pos or NONE_SENTINEL,
                    target_sentence_id=tgt.sentence_id,
                    target_token_id=tt.token_id,
                    target_prev_type=neighbor_type(tgt, -1),
                    target_next_type=neighbor_type(tgt, +1),
                    token_distance=tt.global_id - st.global_id,
                    sentence_distance=tgt.sentence_id - src.sentence_id,
                    dependency_tag=NONE_SENTINEL,
                    label=label_of.get(
                        (src.mention_id, tgt.mention_id), RelationType.NO_RELATION
                    ),
                )
            )
    return frames


def frames_for_corpus(
    corpus, head: str = "last", neighbors: str = "mention"
) -> list[MentionPairFrame]:
    frames = []
    for doc in corpus:
        frames.extend(
            build_pair_frames(doc, list(doc.mentions), list(doc.relations),
                              head, neighbors)
        )
    return frames


def write_frames_csv(frames: list[MentionPairFrame], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FRAME_COLUMNS)
        for f in frames:
            row = [getattr(f, c) for c in FRAME_COLUMNS[:-1]] + [f.label.value]
            writer.writerow(row)


# --- classifier -----------------------------------------------------------


class RelationClassifier(abc.ABC):
    """fit/predict interface; implementations must be deterministic after fit."""

    @abc.abstractmethod
    def fit(self, frames: list[MentionPairFrame]) -> "RelationClassifier":
        ...

    @abc.abstractmethod
    def predict(self, frame: MentionPairFrame) -> tuple[RelationType, dict[RelationType, float]]:
        ...

    def predict_many(self, frames: list[MentionPairFrame]) -> list[RelationType]:
        return [self.predict(f)[0] for f in frames]


def _bin(value: int, cap: int = 5) -> str:
    if value > cap:
        return f">{cap}"
    if value < -cap:
        return f"<-{cap}"
    return str(value)


def _derived_categoricals(f: MentionPairFrame) -> list[tuple[str, str]]:
    """Interaction/bucket features a linear model needs to express typed
    adjacency: the raw signed distances only enter linearly otherwise."""
    return [
        ("type_pair", f"{f.source_type}->{f.target_type}"),
        ("token_distance_bin", _bin(f.token_distance)),
        ("sentence_distance_bin", _bin(f.sentence_distance, cap=2)),
    ]


class _FrameEncoder:
    """One-hot categorical columns (raw, interaction and bucketized) plus
    standardized numerics, fit on training data."""

    def __init__(self):
        self.vocab: dict[tuple[str, str], int] = {}
        self.means: np.ndarray | None = None
        self.stds: np.ndarray | None = None

    @property
    def n_features(self) -> int:
        return len(self.vocab) + len(NUMERIC_COLUMNS)

    @staticmethod
    def _categorical_items(f):
        items = [(col, str(getattr(f, col))) for col in CATEGORICAL_COLUMNS]
        items.extend(_derived_categoricals(f))
        return items

    def fit(self, frames):
        for f in frames:
            for key in self._categorical_items(f):
                if key not in self.vocab:
                    self.vocab[key] = len(self.vocab)
        numerics = self._numeric_matrix(frames)
        self.means = numerics.mean(axis=0)
        stds = numerics.std(axis=0)
        stds[stds == 0] = 1.0
        self.stds = stds
        return self

    @staticmethod
    def _numeric_matrix(frames):
        return np.array(
            [[float(getattr(f, col)) for col in NUMERIC_COLUMNS] for f in frames]
        )

    def transform(self, frames) -> sp.csr_matrix:
        rows, cols = [], []
        for i, f in enumerate(frames):
            for key in self._categorical_items(f):
                j = self.vocab.get(key)
                if j is not None:
                    rows.append(i)
                    cols.append(j)
        onehot = sp.csr_matrix(
            (np.ones(len(rows)), (rows, cols)), shape=(len(frames), len(self.vocab))
        )
        numerics = (self._numeric_matrix(frames) - self.means) / self.stds
        return sp.hstack([onehot, sp.csr_matrix(numerics)], format="csr")


CLASS_ORDER = tuple(RelationType)


class LogisticRegressionClassifier(RelationClassifier):
    """Reference multinomial logistic regression, trained from scratch.

    Mini-batch gradient descent with a fixed shuffling seed; per-class
    probabilities come from a softmax and sum to one.
    """

    def __init__(self, seed: int = 0, epochs: int = 40, batch_size: int = 64,
                 learning_rate: float = 0.5, l2: float = 1e-4):
        self.seed = seed
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.l2 = l2
        self.encoder: _FrameEncoder | None = None
        self.W: np.ndarray | None = None
        self.b: np.ndarray | None = None

    def fit(self, frames):
        if not frames:
            raise RelexError("cannot fit on an empty frame list")
        labels = sorted({f.label for f in frames}, key=CLASS_ORDER.index)
        if len(labels) < 2:
            raise RelexError("training frames contain a single label class")
        self.encoder = _FrameEncoder().fit(frames)
        X = self.encoder.transform(frames)
        y = np.array([CLASS_ORDER.index(f.label) for f in frames])
        n, d = X.shape
        k = len(CLASS_ORDER)
        rng = np.random.default_rng(self.seed)
        W = np.zeros((d, k))
        b = np.zeros(k)
        for epoch in range(self.epochs):
            order = rng.permutation(n)
            lr = self.learning_rate / (1.0 + 0.1 * epoch)
            for start in range(0, n, self.batch_size):
                batch = order[start : start + self.batch_size]
                Xb = X[batch]
                scores = Xb @ W + b
                scores -= scores.max(axis=1, keepdims=True)
                probs = np.exp(scores)
                probs /= probs.sum(axis=1, keepdims=True)
                probs[np.arange(len(batch)), y[batch]] -= 1.0
                probs /= len(batch)
                W -= lr * (np.asarray(Xb.T @ probs) + self.l2 * W)
                b -= lr * probs.sum(axis=0)
        self.W, self.b = W, b
        return self

    def _scores(self, frames) -> np.ndarray:
        if self.W is None:
            raise RelexError("classifier is not fitted")
        X = self.encoder.transform(frames)
        scores = np.asarray(X @ self.W) + self.b
        scores -= scores.max(axis=1, keepdims=True)
        probs = np.exp(scores)
        probs /= probs.sum(axis=1, keepdims=True)
        return probs

    def predict(self, frame):
        probs = self._scores([frame])[0]
        best = int(np.argmax(probs))
        return CLASS_ORDER[best], {c: float(p) for c, p in zip(CLASS_ORDER, probs)}

    def predict_many(self, frames):
        if not frames:
            return []
        probs = self._scores(frames)
        return [CLASS_ORDER[i] for i in np.argmax(probs, axis=1)]

    def save(self, path) -> None:
        payload = {
            "format": "proc2bpmn-relex",
            "version": 1,
            "classes": [c.value for c in CLASS_ORDER],
            "hyper": {
                "seed": self.seed,
                "epochs": self.epochs,
                "batch_size": self.batch_size,
                "learning_rate": self.learning_rate,
                "l2": self.l2,
            },
            "vocab": [[col, value, idx] for (col, value), idx in self.encoder.vocab.items()],
            "means": self.encoder.means.tolist(),
            "stds": self.encoder.stds.tolist(),
            "W": self.W.tolist(),
            "b": self.b.tolist(),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)

    @classmethod
    def load(cls, path) -> "LogisticRegressionClassifier":
        from .ner import ModelError  # shared model-file error type

        try:
            with open(path, encoding="utf-8") as fh:
                payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}: invalid model file: {exc}") from None
        if payload.get("format") != "proc2bpmn-relex" or payload.get("version") != 1:
            raise ModelError(f"{path}: not a supported relation model file")
        if payload["classes"] != [c.value for c in CLASS_ORDER]:
            raise ModelError(f"{path}: class set does not match the relation tagset")
        clf = cls(**payload["hyper"])
        clf.encoder = _FrameEncoder()
        clf.encoder.vocab = {(col, value): int(idx) for col, value, idx in payload["vocab"]}
        clf.encoder.means = np.asarray(payload["means"])
        clf.encoder.stds = np.asarray(payload["stds"])
        clf.W = np.asarray(payload["W"])
        clf.b = np.asarray(payload["b"])
        return clf


def train_relation_classifier(
    frames: list[MentionPairFrame],
    seed: int = 0,
    holdout: float = 0.1,
    **hyper,
) -> LogisticRegressionClassifier:
    """Fit the reference classifier with a held-out split report.

    A seeded 10% split is held out; the classifier is fitted on the rest and
    per-class precision/recall/F1 on the held-out frames are attached as
    ``training_report`` (a MetricsReport).
    """
    from .metrics import classification_report

    if len({f.label for f in frames}) < 2:
        raise RelexError("need at least two distinct labels to train")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(frames))
    n_holdout = max(1, int(round(holdout * len(frames))))
    held_idx = set(order[:n_holdout].tolist())
    held = [frames[i] for i in sorted(held_idx)]
    train = [frames[i] for i in range(len(frames)) if i not in held_idx]
    if len({f.label for f in train}) < 2:
        raise RelexError("training split collapsed to a single label class")
    clf = LogisticRegressionClassifier(seed=seed, **hyper).fit(train)
    gold = [f.label.value for f in held]
    pred = [t.value for t in clf.predict_many(held)]
    clf.training_report = classification_report(
        gold, pred, classes=[c.value for c in CLASS_ORDER]
    )
    return clf


def predict_relations(
    model: RelationClassifier,
    document: Document,
    mentions: list[Mention],
    head: str = "last",
    neighbors: str = "mention",
) -> list[Relation]:
    """Classify every ordered mention pair; NoRelation predictions are dropped."""
    if len(mentions) < 2:
        return []
    frames = build_pair_frames(document, mentions, relations=None, head=head,
                               neighbors=neighbors)
    predicted = model.predict_many(frames)
    out = []
    for frame, rtype in zip(frames, predicted):
        if rtype is not RelationType.NO_RELATION:
            out.append(Relation(frame.source_mention_id, frame.target_mention_id, rtype))
    return out
