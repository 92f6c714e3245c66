"""Coreference clustering rule cascade."""
import pytest

from proc2bpmn.corpus import Document, MentionType
from proc2bpmn.resolve import (
    EntityCluster,
    cluster_mentions,
    clusters_to_json,
    normalize_text,
)


def doc_from(sent_specs):
    """sent_specs: list of (words, [(type, start, end), ...])."""
    sentences = [words for words, _ in sent_specs]
    mentions = []
    for sid, (_, ms) in enumerate(sent_specs):
        for mtype, start, end in ms:
            mentions.append((mtype, sid, start, end))
    return Document.from_sentences("d", sentences, mentions=mentions)


class TestNormalization:
    def test_strips_leading_articles(self):
        assert normalize_text("The Staff Member") == "staff member"
        assert normalize_text("a clerk") == "clerk"
        assert normalize_text("the the form") == "form"


class TestClusterRules:
    def test_exact_match_after_normalization(self):
        doc = doc_from([
            (["the", "staff", "member", "arrives"],
             [(MentionType.ACTOR, 0, 2)]),
            (["staff", "member", "leaves"], [(MentionType.ACTOR, 0, 1)]),
        ])
        clusters = cluster_mentions(doc, list(doc.mentions))
        assert len(clusters) == 1
        c = clusters[0]
        assert c.members == (0, 1)
        assert doc.mentions[c.canonical].text == "the staff member"

    def test_pronoun_joins_nearest_preceding_actor(self):
        doc = doc_from([
            (["the", "clerk", "works"], [(MentionType.ACTOR, 0, 1)]),
            (["he", "rests"], [(MentionType.ACTOR, 0, 0)]),
        ])
        clusters = cluster_mentions(doc, list(doc.mentions))
        assert len(clusters) == 1
        assert doc.mentions[clusters[0].canonical].text == "the clerk"

    def test_pronoun_gap_limit(self):
        doc = doc_from([
            (["the", "clerk", "works"], [(MentionType.ACTOR, 0, 1)]),
            (["nothing", "happens"], []),
            (["nothing", "happens", "again"], []),
            (["still", "nothing"], []),
            (["he", "rests"], [(MentionType.ACTOR, 0, 0)]),
        ])
        clusters = cluster_mentions(doc, list(doc.mentions))
        assert len(clusters) == 2  # gap of 4 sentences: no link

    def test_head_noun_match(self):
        doc = doc_from([
            (["the", "sales", "manager", "and", "the", "manager", "meet"],
             [(MentionType.ACTOR, 0, 2), (MentionType.ACTOR, 4, 5)]),
        ])
        clusters = cluster_mentions(doc, list(doc.mentions))
        assert len(clusters) == 1
        assert doc.mentions[clusters[0].canonical].text == "the sales manager"

    def test_rules_individually_switchable(self):
        doc = doc_from([
            (["the", "sales", "manager", "and", "the", "manager", "meet"],
             [(MentionType.ACTOR, 0, 2), (MentionType.ACTOR, 4, 5)]),
        ])
        clusters = cluster_mentions(doc, list(doc.mentions), head_match=False)
        assert len(clusters) == 2

    def test_non_clustered_types_stay_singleton(self):
        doc = doc_from([
            (["submit", "submit", "if", "if"],
             [(MentionType.ACTIVITY, 0, 0), (MentionType.ACTIVITY, 1, 1),
              (MentionType.XOR_GATEWAY, 2, 2), (MentionType.XOR_GATEWAY, 3, 3)]),
        ])
        clusters = cluster_mentions(doc, list(doc.mentions))
        assert len(clusters) == 4
        assert all(len(c.members) == 1 for c in clusters)

    def test_activity_data_clustered_but_not_with_actors(self):
        doc = doc_from([
            (["the", "report", "cites", "the", "report"],
             [(MentionType.ACTIVITY_DATA, 0, 1), (MentionType.ACTIVITY_DATA, 3, 4)]),
            (["the", "report", "speaks"], [(MentionType.ACTOR, 0, 1)]),
        ])
        clusters = cluster_mentions(doc, list(doc.mentions))
        by_type = {c.entity_type: c for c in clusters}
        assert by_type[MentionType.ACTIVITY_DATA].members == (0, 1)
        assert by_type[MentionType.ACTOR].members == (2,)


class TestClusterInvariants:
    def _doc(self):
        return doc_from([
            (["the", "clerk", "sends", "the", "form"],
             [(MentionType.ACTOR, 0, 1), (MentionType.ACTIVITY, 2, 2),
              (MentionType.ACTIVITY_DATA, 3, 4)]),
            (["he", "signs", "the", "form"],
             [(MentionType.ACTOR, 0, 0), (MentionType.ACTIVITY, 1, 1),
              (MentionType.ACTIVITY_DATA, 2, 3)]),
        ])

    def test_partition(self):
        doc = self._doc()
        clusters = cluster_mentions(doc, list(doc.mentions))
        seen = [m for c in clusters for m in c.members]
        assert sorted(seen) == [m.mention_id for m in doc.mentions]

    def test_canonical_is_longest_member(self):
        doc = self._doc()
        for c in cluster_mentions(doc, list(doc.mentions)):
            canon = doc.mentions[c.canonical]
            assert c.canonical in c.members
            for mid in c.members:
                assert len(canon.text) >= len(doc.mentions[mid].text)

    def test_same_type_within_cluster(self):
        doc = self._doc()
        for c in cluster_mentions(doc, list(doc.mentions)):
            assert all(doc.mentions[m].type is c.entity_type for m in c.members)

    def test_order_independent_for_set_rules(self):
        doc = self._doc()
        mentions = list(doc.mentions)
        a = cluster_mentions(doc, mentions, pronouns=False)
        b = cluster_mentions(doc, list(reversed(mentions)), pronouns=False)
        assert {c.members for c in a} == {c.members for c in b}

    def test_json_export(self):
        doc = self._doc()
        text = clusters_to_json(cluster_mentions(doc, list(doc.mentions)))
        import json
        payload = json.loads(text)
        assert all(set(c) == {"entity_type", "canonical", "members"} for c in payload)
