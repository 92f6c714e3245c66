"""Entity resolution: cluster coreferent Actor and ActivityData mentions.

Rule cascade (each rule individually switchable):
  1. exact normalized-text match (lowercase, leading article stripped)
  2. head-noun match (last token equality)
  3. pronominal Actors join the nearest preceding non-pronoun Actor within
     a two-sentence window

The canonical mention of a cluster is the most complete one: longest text,
earliest on ties.  Activities, gateways and specifications stay singletons.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .corpus import Document, Mention, MentionType

ARTICLES = ("the", "a", "an")
PRONOUNS = frozenset({"he", "she", "they", "it", "him", "her", "them"})

#: Pronouns never link across more than this many sentences.
MAX_PRONOUN_GAP = 2

CLUSTERED_TYPES = (MentionType.ACTOR, MentionType.ACTIVITY_DATA)


@dataclass(frozen=True)
class EntityCluster:
    members: tuple[int, ...]  # mention ids, sorted
    canonical: int
    entity_type: MentionType


def normalize_text(text: str) -> str:
    words = text.lower().split()
    while words and words[0] in ARTICLES:
        words = words[1:]
    return " ".join(words)


def is_pronoun(mention: Mention) -> bool:
    return mention.text.lower() in PRONOUNS


class _UnionFind:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller root wins, for determinism
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def cluster_mentions(
    document: Document,
    mentions: list[Mention],
    *,
    exact_match: bool = True,
    head_match: bool = True,
    pronouns: bool = True,
) -> list[EntityCluster]:
    """Partition mentions into coreference clusters.

    Rules 1-2 are set-based and order-independent; rule 3 attaches pronouns
    to the nearest preceding antecedent cluster.  Output order follows the
    earliest member of each cluster.
    """
    uf = _UnionFind([m.mention_id for m in mentions])
    by_id = {m.mention_id: m for m in mentions}

    for mtype in CLUSTERED_TYPES:
        group = [m for m in mentions if m.type is mtype]
        candidates = [m for m in group if not (mtype is MentionType.ACTOR and is_pronoun(m))]
        if exact_match:
            by_norm: dict[str, int] = {}
            for m in candidates:
                key = normalize_text(m.text)
                if key in by_norm:
                    uf.union(by_norm[key], m.mention_id)
                else:
                    by_norm[key] = m.mention_id
        if head_match:
            by_head: dict[str, int] = {}
            for m in candidates:
                head = m.text.lower().split()[-1]
                if head in by_head:
                    uf.union(by_head[head], m.mention_id)
                else:
                    by_head[head] = m.mention_id

    if pronouns:
        actors = sorted(
            (m for m in mentions if m.type is MentionType.ACTOR),
            key=lambda m: (m.sentence_id, m.token_start),
        )
        for i, m in enumerate(actors):
            if not is_pronoun(m):
                continue
            for prev in reversed(actors[:i]):
                if is_pronoun(prev):
                    continue
                if m.sentence_id - prev.sentence_id > MAX_PRONOUN_GAP:
                    break
                uf.union(prev.mention_id, m.mention_id)
                break

    groups: dict[int, list[int]] = {}
    for m in mentions:
        groups.setdefault(uf.find(m.mention_id), []).append(m.mention_id)

    clusters = []
    for members in groups.values():
        members = sorted(members)
        canonical = min(
            members,
            key=lambda mid: (
                -len(by_id[mid].text),
                by_id[mid].sentence_id,
                by_id[mid].token_start,
            ),
        )
        clusters.append(
            EntityCluster(tuple(members), canonical, by_id[members[0]].type)
        )
    clusters.sort(key=lambda c: c.members[0])
    return clusters


def clusters_to_json(clusters: list[EntityCluster]) -> str:
    return json.dumps(
        [
            {
                "entity_type": c.entity_type.value,
                "canonical": c.canonical,
                "members": list(c.members),
            }
            for c in clusters
        ],
        indent=2,
        sort_keys=True,
    )
