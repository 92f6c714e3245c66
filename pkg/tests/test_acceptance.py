"""Acceptance suite.

Every numbered criterion runs as one test at its stated tolerance and prints
one PASS/FAIL line.  The CRF experiments (criteria 2-4, 10) train real models
on the bundled corpora and take a few minutes in total; everything else is
fast.  Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""
import itertools
import random
import time
from decimal import Decimal
from pathlib import Path

import numpy as np
import pytest

from proc2bpmn import crf
from proc2bpmn.bpmn import (
    BpmnEdge,
    BpmnGraph,
    BpmnNode,
    EdgeKind,
    NodeKind,
    assemble_graph,
    close_gateways,
    emit_dot,
)
from proc2bpmn.cli import run_command
from proc2bpmn.corpus import (
    IOB_TAGS,
    MentionType,
    RelationType,
    corpus_stats,
    encode_iob,
    kfold_split,
    merge_corpora,
)
from proc2bpmn.corpus_io import load_corpus
from proc2bpmn.dot import parse_dot
from proc2bpmn.metrics import (
    PipelineScore,
    aggregate_cv,
    classification_report,
    ner_metrics,
    percent,
)
from proc2bpmn.ner import TrainConfig, featurize_corpus, tag_document, train_crf
from proc2bpmn.preprocess import build_tagger
from proc2bpmn.relex import (
    CLASS_ORDER,
    LogisticRegressionClassifier,
    MentionPairFrame,
    NegativeSampling,
    RandomOverSampling,
    apply_sampling,
    frames_for_corpus,
    train_relation_classifier,
)
from proc2bpmn.resolve import cluster_mentions

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
PET_PATH = DATA_DIR / "pet.jsonl"
LESCH_PATH = DATA_DIR / "leschneider.jsonl"
PET_LAYOUT_PATH = DATA_DIR / "pet_v11.pet.json"

CV_SEED = 13

#: Published mention statistics (absolute, relative %, per document, per
#: sentence) for PET v1.1 and for the combined corpus.
EXPECTED_PET_STATS = {
    "Actor": (449, "26.74", "9.98", "1.08"),
    "Activity": (502, "29.90", "11.16", "1.20"),
    "ActivityData": (459, "27.34", "10.20", "1.10"),
    "XorGateway": (117, "6.97", "2.60", "0.28"),
    "FurtherSpecification": (64, "3.81", "1.42", "0.15"),
    "ConditionSpecification": (80, "4.76", "1.78", "0.19"),
    "AndGateway": (8, "0.48", "0.18", "0.02"),
}
EXPECTED_COMBINED_STATS = {
    "Actor": (542, "26.02", "9.03", "1.07"),
    "Activity": (613, "29.43", "10.22", "1.21"),
    "ActivityData": (568, "27.27", "9.47", "1.12"),
    "XorGateway": (136, "6.53", "2.27", "0.27"),
    "FurtherSpecification": (86, "4.13", "1.43", "0.17"),
    "ConditionSpecification": (98, "4.70", "1.63", "0.19"),
    "AndGateway": (40, "1.92", "0.67", "0.08"),
}

#: Integer counts of the published pipeline evaluation (words, gold,
#: predicted, correct per document) and the percentages they must reproduce.
PUBLISHED_ELEMENT_ROWS = [
    ("Doc 1", 104, 21, 24, 20, "83.3%", "95.2%", "88.9%"),
    ("Doc 2", 69, 17, 18, 17, "94.4%", "100.0%", "97.1%"),
    ("Doc 3", 51, 12, 12, 12, "100.0%", "100.0%", "100.0%"),
    ("Doc 4", 36, 13, 8, 8, "100.0%", "61.5%", "76.2%"),
    ("Doc 5", 88, 19, 18, 15, "83.3%", "78.9%", "81.1%"),
    ("Doc 6", 81, 21, 21, 19, "90.5%", "90.5%", "90.5%"),
]
PUBLISHED_ELEMENT_TOTAL = (429, 103, 101, 91, "90.1%", "88.3%", "89.2%")
PUBLISHED_RELATION_ROWS = [
    ("Doc 1", 104, 35, 37, 19, "51.4%", "54.3%", "52.8%"),
    ("Doc 2", 69, 32, 31, 29, "93.5%", "90.6%", "92.1%"),
    ("Doc 3", 51, 20, 20, 19, "95.0%", "95.0%", "95.0%"),
    ("Doc 4", 36, 23, 15, 11, "73.3%", "47.8%", "57.9%"),
    ("Doc 5", 88, 33, 31, 23, "74.2%", "69.7%", "71.9%"),
    ("Doc 6", 81, 29, 28, 22, "78.6%", "75.9%", "77.2%"),
]
PUBLISHED_RELATION_TOTAL = (429, 172, 162, 123, "75.9%", "71.5%", "73.7%")

LIBRARY_TEXT = (
    "When a request for a book comes in, the library staff member consults "
    "the digital catalog to check for the book's availability. If the book "
    "is currently on loan or not in the library's collection, the staff "
    "member informs the requester right away. If the book is available, the "
    "staff member starts the checkout procedure by logging the book against "
    "the requester's library account and simultaneously retrieving the book "
    "using the automated system."
)


def report_line(num, name, passed, detail=""):
    status = "PASS" if passed else "FAIL"
    print(f"\n[ACCEPTANCE {num:02d}] {name}: {status}  {detail}")


# --- shared fixtures (module scope: trained once, reused) -------------------


@pytest.fixture(scope="module")
def pet_corpus():
    return load_corpus(PET_PATH, provenance="PET")


@pytest.fixture(scope="module")
def lesch_corpus():
    return load_corpus(LESCH_PATH, provenance="LESCHNEIDER")


@pytest.fixture(scope="module")
def combined_corpus(pet_corpus, lesch_corpus):
    return merge_corpora(pet_corpus, lesch_corpus)


def _cv_reports(corpus, k=5, seed=CV_SEED):
    reports = []
    for train, test in kfold_split(corpus, k, seed):
        model, _ = train_crf(featurize_corpus(train), TrainConfig())
        gold, pred = [], []
        for doc in test:
            gold.extend(encode_iob(doc))
            pred.extend(tag_document(model, doc))
        reports.append(ner_metrics(gold, pred))
    return reports


@pytest.fixture(scope="module")
def pet_cv_aggregate(pet_corpus):
    return aggregate_cv(_cv_reports(pet_corpus))


@pytest.fixture(scope="module")
def combined_cv_aggregate(combined_corpus):
    return aggregate_cv(_cv_reports(combined_corpus))


@pytest.fixture(scope="module")
def combined_models(combined_corpus):
    """Full-corpus NER and RE models, the configuration the pipeline ships."""
    ner_model, _ = train_crf(
        featurize_corpus(combined_corpus),
        TrainConfig(),
        pos_lexicon=dict(build_tagger(combined_corpus).lexicon),
    )
    frames = frames_for_corpus(combined_corpus)
    frames = apply_sampling(frames, NegativeSampling(5.0, seed=0))
    frames = apply_sampling(
        frames, RandomOverSampling(RelationType.FLOW, 2.0, seed=0)
    )
    re_model = LogisticRegressionClassifier(seed=0).fit(frames)
    return ner_model, re_model


# --- criteria ----------------------------------------------------------------


class TestCriterion01DatasetStatistics:
    def _check_table(self, stats, expected):
        failures = []
        for type_name, (absolute, rel, per_doc, per_sent) in expected.items():
            row = stats.rows[MentionType(type_name)]
            got = (row.absolute, str(row.relative), str(row.per_document),
                   str(row.per_sentence))
            want = (absolute, rel, per_doc, per_sent)
            if got != want:
                failures.append(f"{type_name}: {got} != {want}")
        return failures

    def test_statistics_reproduce_published_tables(
        self, pet_corpus, lesch_corpus, combined_corpus, capsys
    ):
        start = time.perf_counter()
        assert run_command(["stats", "--corpus", str(PET_PATH)]) == 0
        elapsed = time.perf_counter() - start
        out = capsys.readouterr().out
        failures = self._check_table(corpus_stats(pet_corpus), EXPECTED_PET_STATS)
        failures += self._check_table(corpus_stats(combined_corpus), EXPECTED_COMBINED_STATS)
        # the printed table carries the same figures
        for value in ("449", "26.74%", "9.98", "0.02"):
            if value not in out:
                failures.append(f"stats output missing {value}")
        if elapsed >= 5.0:
            failures.append(f"stats took {elapsed:.2f}s (limit 5s)")
        # the PET-layout export of the same corpus must agree exactly
        adapter = load_corpus(PET_LAYOUT_PATH, format="pet-json")
        failures += self._check_table(corpus_stats(adapter), EXPECTED_PET_STATS)
        report_line(1, "dataset statistics (exact)", not failures,
                    f"stats in {elapsed:.2f}s")
        assert not failures, failures


class TestCriterion02CrfBaseline:
    def test_pet_cross_validation_band(self, pet_cv_aggregate):
        weighted = pet_cv_aggregate.weighted.f1
        b_actor = pet_cv_aggregate.classes["B-Actor"].f1
        b_activity = pet_cv_aggregate.classes["B-Activity"].f1
        ok = (0.72 - 0.05 <= weighted <= 0.72 + 0.05
              and b_actor >= 0.75 and b_activity >= 0.73)
        report_line(
            2, "CRF baseline on PET (cross-validated)", ok,
            f"weighted F1 {weighted:.4f} (0.72±0.05), "
            f"B-Actor {b_actor:.3f} (>=0.75), B-Activity {b_activity:.3f} (>=0.73)",
        )
        assert 0.67 <= weighted <= 0.77
        assert b_actor >= 0.75
        assert b_activity >= 0.73


class TestCriterion03TransferGap:
    def test_pet_model_degrades_on_leschneider(
        self, pet_corpus, lesch_corpus, pet_cv_aggregate
    ):
        model, _ = train_crf(featurize_corpus(pet_corpus), TrainConfig())
        gold, pred = [], []
        for doc in lesch_corpus:
            gold.extend(encode_iob(doc))
            pred.extend(tag_document(model, doc))
        transfer = ner_metrics(gold, pred).weighted.f1
        baseline = pet_cv_aggregate.weighted.f1
        drop = baseline - transfer
        ok = drop >= 0.05
        report_line(
            3, "cross-dataset transfer", ok,
            f"PET CV {baseline:.4f} -> LESCHNEIDER {transfer:.4f}, "
            f"drop {drop:.4f} (need >= 0.05; published run dropped 0.72 -> 0.61)",
        )
        assert ok


class TestCriterion04CombinedTraining:
    def test_and_gateway_becomes_learnable(self, combined_cv_aggregate):
        scores = combined_cv_aggregate.classes["B-AndGateway"]
        ok = scores.f1 > 0 and scores.precision >= 0.30
        report_line(
            4, "combined-corpus training", ok,
            f"B-AndGateway F1 {scores.f1:.3f} (>0), "
            f"precision {scores.precision:.3f} (>=0.30); published run: 23% / 50%",
        )
        assert scores.f1 > 0
        assert scores.precision >= 0.30


class TestCriterion05CrfNumerics:
    def test_gradient_viterbi_and_partition(self):
        start = time.perf_counter()
        rng = np.random.default_rng(99)
        failures = []

        # gradient vs central finite differences on 20 random small models
        for trial in range(20):
            n_feats = int(rng.integers(3, 7))
            n_tags = int(rng.integers(2, 6))
            seqs, labels = [], []
            for length in rng.integers(1, 5, size=3):
                seq = []
                for _ in range(length):
                    k = int(rng.integers(1, n_feats + 1))
                    idx = rng.choice(n_feats, size=k, replace=False).astype(np.int64)
                    seq.append((idx, rng.normal(size=k)))
                seqs.append(seq)
                labels.append([int(x) for x in rng.integers(0, n_tags, size=length)])
            packed = crf.pack(seqs, labels, n_feats, n_tags)
            n = n_feats * n_tags + n_tags * n_tags
            params = rng.normal(size=n) * 0.6
            lam = float(rng.uniform(0, 0.4))
            _, grad = crf.objective(params, packed, lam)
            h = 1e-5
            for i in rng.choice(n, size=min(10, n), replace=False):
                e = np.zeros(n)
                e[i] = h
                fp, _ = crf.objective(params + e, packed, lam)
                fm, _ = crf.objective(params - e, packed, lam)
                num = (fp - fm) / (2 * h)
                if abs(grad[i] - num) > 1e-4 * max(1.0, abs(num)):
                    failures.append(
                        f"gradient trial {trial} index {i}: {grad[i]} vs {num}"
                    )

        # Viterbi equals exhaustive search over the full 15-tag set
        Y = len(IOB_TAGS)
        for trial in range(25):
            T = int(rng.integers(1, 5))
            emis = rng.normal(size=(T, Y))
            trans = rng.normal(size=(Y, Y))
            path, score = crf.viterbi(emis, trans)
            best = max(
                crf.path_score(emis, trans, list(p))
                for p in itertools.product(range(Y), repeat=T)
            )
            if abs(best - score) > 1e-9:
                failures.append(f"viterbi trial {trial}: {score} != {best}")
            if abs(crf.path_score(emis, trans, path) - best) > 1e-9:
                failures.append(f"viterbi path score mismatch, trial {trial}")

        # forward and backward partition functions agree
        for trial in range(10):
            lengths = rng.integers(1, 7, size=4)
            seqs = []
            for length in lengths:
                seq = []
                for _ in range(length):
                    idx = rng.choice(5, size=2, replace=False).astype(np.int64)
                    seq.append((idx, rng.normal(size=2)))
                seqs.append(seq)
            packed = crf.pack(seqs, [[0] * int(n) for n in lengths], 5, 6)
            W = rng.normal(size=(5, 6))
            trans = rng.normal(size=(6, 6))
            emis = crf.emission_scores(packed, W)
            scores = emis[packed.token_index]
            scores[~packed.mask] = 0.0
            fw = crf.forward_log_z(scores, packed.mask, trans)
            bw = crf.backward_log_z(scores, packed.mask, trans)
            if np.abs(fw - bw).max() > 1e-8:
                failures.append(f"logZ trial {trial}: {np.abs(fw - bw).max()}")

        elapsed = time.perf_counter() - start
        if elapsed >= 60:
            failures.append(f"numerics took {elapsed:.1f}s (limit 60s)")
        report_line(5, "CRF numerics (gradient/Viterbi/log Z)", not failures,
                    f"in {elapsed:.1f}s")
        assert not failures, failures[:5]


def _frame(label, key):
    return MentionPairFrame(
        source_mention_id=key, target_mention_id=key + 1,
        source_text=f"s{key}", source_type="Activity", source_pos="VBZ",
        source_sentence_id=0, source_token_id=key,
        source_prev_type="NONE", source_next_type="NONE",
        target_text=f"t{key}", target_type="Activity", target_pos="VBZ",
        target_sentence_id=0, target_token_id=key + 1,
        target_prev_type="NONE", target_next_type="NONE",
        token_distance=1, sentence_distance=0,
        dependency_tag="NONE", label=label,
    )


class TestCriterion06SamplingArithmetic:
    def test_exact_counts_and_random_properties(self):
        import math

        failures = []
        frames = [_frame(RelationType.FLOW, i) for i in range(30)]
        frames += [_frame(RelationType.USES, 100 + i) for i in range(11)]
        out = apply_sampling(frames, RandomOverSampling(RelationType.FLOW, 2.0, seed=1))
        if sum(f.label is RelationType.FLOW for f in out) != 60:
            failures.append("ROS 2.0 did not exactly double the flow count")
        if sum(f.label is RelationType.USES for f in out) != 11:
            failures.append("ROS changed a non-target class count")

        rng = random.Random(6)
        for _ in range(60):
            n_pos = rng.randint(1, 25)
            n_neg = rng.randint(0, 80)
            rate = rng.uniform(0.3, 8.0)
            mult = rng.uniform(1.0, 4.0)
            fs = [_frame(RelationType.FLOW, 2 * i) for i in range(n_pos)]
            fs += [_frame(RelationType.NO_RELATION, 1000 + 2 * i) for i in range(n_neg)]
            neg = apply_sampling(fs, NegativeSampling(rate, seed=rng.randint(0, 99)))
            kept_pos = [f for f in neg if f.label is not RelationType.NO_RELATION]
            kept_neg = [f for f in neg if f.label is RelationType.NO_RELATION]
            if kept_pos != fs[:n_pos]:
                failures.append("negative sampling dropped or altered a positive")
            if len(kept_neg) != min(n_neg, math.ceil(rate * n_pos)):
                failures.append("negative sampling count wrong")
            ros = apply_sampling(fs, RandomOverSampling(RelationType.FLOW, mult,
                                                        seed=rng.randint(0, 99)))
            if sum(f.label is RelationType.FLOW for f in ros) != math.ceil(mult * n_pos):
                failures.append("ROS count wrong")
            if sum(f.label is RelationType.NO_RELATION for f in ros) != n_neg:
                failures.append("ROS changed the negative count")
            if not set(ros) <= set(fs):
                failures.append("sampling altered frame contents")
        report_line(6, "sampling arithmetic (ROS / negative sampling)",
                    not failures)
        assert not failures, failures[:5]


def _separable_frames(n=40):
    rules = {
        ("Activity", "Activity"): RelationType.FLOW,
        ("Activity", "ActivityData"): RelationType.USES,
        ("Activity", "Actor"): RelationType.ACTOR_PERFORMER,
        ("XorGateway", "ConditionSpecification"): RelationType.FLOW,
        ("Actor", "Actor"): RelationType.NO_RELATION,
    }
    frames = []
    key = 0
    for (src_t, tgt_t), label in rules.items():
        for i in range(n):
            f = _frame(label, key)
            frames.append(
                f.__class__(**{**f.__dict__, "source_type": src_t,
                               "target_type": tgt_t,
                               "source_text": f"s{i % 6}",
                               "target_text": f"t{i % 4}"})
            )
            key += 2
    return frames


class TestCriterion07RelationQuality:
    def test_separable_gate_and_flow_report(self, combined_corpus):
        clf = train_relation_classifier(_separable_frames(), seed=2)
        holdout = clf.training_report
        gate_ok = holdout.micro.f1 == 1.0

        # report-only comparison on held-out documents of the combined corpus
        train_c, test_c = kfold_split(combined_corpus, 10, seed=5)[0]
        frames = frames_for_corpus(train_c)
        frames = apply_sampling(frames, NegativeSampling(5.0, seed=0))
        frames = apply_sampling(frames, RandomOverSampling(RelationType.FLOW, 2.0,
                                                           seed=0))
        model = LogisticRegressionClassifier(seed=0).fit(frames)
        test_frames = frames_for_corpus(test_c)
        gold = [f.label.value for f in test_frames]
        pred = [t.value for t in model.predict_many(test_frames)]
        rep = classification_report(gold, pred, [c.value for c in CLASS_ORDER])
        flow_f1 = rep.classes["Flow"].f1
        report_line(
            7, "relation quality", gate_ok,
            f"separable held-out accuracy {holdout.micro.f1:.3f} (gate: 1.0); "
            f"Flow F1 on held-out combined data {flow_f1:.3f} "
            f"vs the published 0.62 (report-only)",
        )
        assert gate_ok


class TestCriterion08PipelineScoring:
    def test_table_percentages_reproduce_exactly(self):
        start = time.perf_counter()
        score = PipelineScore.from_counts(
            elements=[row[:5] for row in PUBLISHED_ELEMENT_ROWS],
            relations=[row[:5] for row in PUBLISHED_RELATION_ROWS],
        )
        failures = []
        for rows, expected in ((score.elements, PUBLISHED_ELEMENT_ROWS),
                               (score.relations, PUBLISHED_RELATION_ROWS)):
            for got, want in zip(rows, expected):
                triple = (percent(got.precision), percent(got.recall),
                          percent(got.f1))
                if triple != want[5:]:
                    failures.append(f"{want[0]}: {triple} != {want[5:]}")
        for total, want in ((score.elements_total, PUBLISHED_ELEMENT_TOTAL),
                            (score.relations_total, PUBLISHED_RELATION_TOTAL)):
            if (total.words, total.gold, total.predicted, total.correct) != want[:4]:
                failures.append(f"total counts {want[:4]} off")
            triple = (percent(total.precision), percent(total.recall),
                      percent(total.f1))
            if triple != want[4:]:
                failures.append(f"total percentages {triple} != {want[4:]}")
        elapsed = time.perf_counter() - start
        if elapsed >= 1.0:
            failures.append(f"scoring took {elapsed:.3f}s (limit 1s)")
        report_line(8, "pipeline scoring reproduces the published table",
                    not failures, f"in {elapsed*1000:.0f}ms")
        assert not failures, failures


def _random_document_graph(rng):
    """Random mentions/relations/clusters plus the assembled graph."""
    from proc2bpmn.corpus import Document, Relation

    n_sent = rng.randint(1, 4)
    sentences = []
    for _ in range(n_sent):
        sentences.append([f"w{rng.randint(0, 30)}" for _ in range(rng.randint(4, 10))])
    mentions = []
    for sid, sent in enumerate(sentences):
        pos = 0
        while pos < len(sent):
            if rng.random() < 0.55:
                end = min(pos + rng.randint(0, 2), len(sent) - 1)
                mtype = rng.choice(list(MentionType))
                mentions.append((mtype, sid, pos, end))
                pos = end + 1
            else:
                pos += 1
    doc = Document.from_sentences("synthetic", sentences, mentions=mentions)
    ms = list(doc.mentions)
    ids = [m.mention_id for m in ms]
    relations = []
    if len(ids) >= 2:
        gold_types = [r for r in RelationType if r is not RelationType.NO_RELATION]
        for _ in range(rng.randint(0, 2 * len(ids))):
            a, b = rng.sample(ids, 2)
            relations.append(Relation(a, b, rng.choice(gold_types)))
    clusters = cluster_mentions(doc, ms)
    graph = assemble_graph(ms, relations, clusters)
    return ms, graph


def _seq_reachable_pairs(graph):
    adj = {}
    for e in graph.edges:
        if e.kind is EdgeKind.SEQUENCE_FLOW:
            adj.setdefault(e.source, set()).add(e.target)
    base = {n.node_id for n in graph.nodes if not n.node_id.startswith("join_")}
    pairs = set()
    for start in base:
        seen, stack = set(), [start]
        while stack:
            cur = stack.pop()
            for nxt in adj.get(cur, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        pairs.update((start, t) for t in seen if t in base)
    return pairs


class TestCriterion09GraphInvariants:
    def test_200_random_documents(self):
        rng = random.Random(31)
        failures = []
        for trial in range(200):
            mentions, graph = _random_document_graph(rng)
            covered = set()
            for n in graph.nodes:
                covered.update(n.mentions)
            for e in graph.edges:
                covered.update(e.mentions)
            want = {m.mention_id for m in mentions}
            if covered != want:
                failures.append(f"trial {trial}: mentions {want - covered} not visible")
            closed = close_gateways(graph)
            twice = close_gateways(closed)
            if sorted(n.node_id for n in closed.nodes) != \
                    sorted(n.node_id for n in twice.nodes) or \
                    sorted((e.source, e.target, e.label) for e in closed.edges) != \
                    sorted((e.source, e.target, e.label) for e in twice.edges):
                failures.append(f"trial {trial}: close_gateways not idempotent")
            before = _seq_reachable_pairs(graph)
            after = _seq_reachable_pairs(closed)
            if not before <= after:
                failures.append(f"trial {trial}: reachability lost")
            dot_a = emit_dot(closed)
            dot_b = emit_dot(closed)
            if dot_a != dot_b:
                failures.append(f"trial {trial}: DOT output not byte-identical")
            try:
                parse_dot(dot_a)
            except Exception as exc:
                failures.append(f"trial {trial}: DOT does not parse: {exc}")
            if failures:
                break
        report_line(9, "graph assembly invariants on 200 random documents",
                    not failures)
        assert not failures, failures


class TestCriterion10EndToEndSmoke:
    def test_extract_on_library_example(self, combined_models, tmp_path, capsys):
        from proc2bpmn.ner import save_model

        ner_model, re_model = combined_models
        ner_path = tmp_path / "ner.json"
        re_path = tmp_path / "re.json"
        save_model(ner_model, ner_path)
        re_model.save(re_path)
        text_path = tmp_path / "library.txt"
        text_path.write_text(LIBRARY_TEXT, encoding="utf-8")
        dot_path = tmp_path / "library.dot"
        json_path = tmp_path / "library.json"
        code = run_command([
            "extract", "--text", str(text_path), "--ner", str(ner_path),
            "--re", str(re_path), "--out", str(dot_path),
            "--json", str(json_path),
        ])
        capsys.readouterr()
        graph = BpmnGraph.from_json(json_path.read_text(encoding="utf-8"))
        kinds = [n.kind for n in graph.nodes]
        n_xor = kinds.count(NodeKind.XOR_GATEWAY)
        n_and = kinds.count(NodeKind.AND_GATEWAY)
        labeled = [e for e in graph.edges
                   if e.kind is EdgeKind.SEQUENCE_FLOW and e.label]
        parse_dot(dot_path.read_text(encoding="utf-8"))
        ok = code == 0 and n_xor >= 1 and n_and >= 1 and len(labeled) >= 1
        report_line(
            10, "end-to-end extraction on the library example", ok,
            f"XOR nodes {n_xor} (>=1), AND nodes {n_and} (>=1), "
            f"condition-labeled edges {len(labeled)} (>=1)",
        )
        assert code == 0
        assert n_xor >= 1
        assert n_and >= 1
        assert labeled
