"""CRF feature extraction, objective/gradient numerics, training, decoding."""
import itertools

import numpy as np
import pytest

from proc2bpmn import crf
from proc2bpmn.corpus import Corpus, Document, IOB_TAGS, MentionType, decode_iob
from proc2bpmn.ner import (
    CrfModel,
    ModelError,
    TrainConfig,
    crf_objective,
    extract_features,
    featurize_corpus,
    load_embeddings,
    load_model,
    predict_mentions,
    save_model,
    train_crf,
    viterbi_decode,
)


def tok(text, pos="NN"):
    from proc2bpmn.corpus import Token
    return Token(text, pos, 0, 0, 0)


def sentence(*texts, pos=None):
    from proc2bpmn.corpus import Token
    pos = pos or ["NN"] * len(texts)
    return [Token(t, p, 0, i, i) for i, (t, p) in enumerate(zip(texts, pos))]


class TestFeatures:
    def test_first_token_features(self):
        feats = extract_features(sentence("The", "clerk"))
        f0 = feats[0]
        assert f0["lower=the"] == 1.0
        assert "istitle" in f0
        assert "BOS" in f0
        assert f0["+1:lower=clerk"] == 1.0
        assert "bias" in f0
        assert "-1:lower=the" not in f0

    def test_single_token_has_bos_and_eos(self):
        feats = extract_features(sentence("go"))
        assert "BOS" in feats[0] and "EOS" in feats[0]

    def test_suffix_and_shape_features(self):
        feats = extract_features(sentence("ACME", "42"))
        assert "isupper" in feats[0]
        assert "isdigit" in feats[1]
        assert feats[0]["suffix3=cme"] == 1.0
        assert feats[0]["suffix2=me"] == 1.0

    def test_embedding_features(self):
        vecs = {"checkout": np.arange(1, 51, dtype=float)}
        feats = extract_features(sentence("checkout"), embeddings=vecs)
        emb = {k: v for k, v in feats[0].items() if k.startswith("emb[")}
        assert len(emb) == 50
        assert emb["emb[0]"] == 1.0

    def test_oov_embedding_contributes_nothing(self):
        vecs = {"known": np.zeros(8)}
        feats = extract_features(sentence("known", "unknown"), embeddings=vecs)
        for f in feats:
            assert not any(k.startswith("emb[") for k in f)

    def test_bias_at_every_position(self):
        feats = extract_features(sentence("a", "b", "c"))
        assert all("bias" in f for f in feats)


def random_packed(rng, n_feats=6, n_tags=4, lengths=(2, 3, 1)):
    seqs, labels = [], []
    for L in lengths:
        seq = []
        for _ in range(L):
            k = int(rng.integers(1, 4))
            idx = rng.choice(n_feats, size=k, replace=False).astype(np.int64)
            seq.append((idx, rng.normal(size=k)))
        seqs.append(seq)
        labels.append([int(x) for x in rng.integers(0, n_tags, size=L)])
    return crf.pack(seqs, labels, n_feats, n_tags)


class TestObjective:
    def test_uniform_nll_length_one(self):
        packed = crf.pack([[(np.array([0]), np.array([1.0]))]], [[3]], 1, 15)
        nll, _ = crf.objective(np.zeros(15 + 225), packed, 0.0)
        assert nll == pytest.approx(np.log(15))

    def test_uniform_nll_length_two(self):
        seq = [(np.array([0]), np.array([1.0]))] * 2
        packed = crf.pack([seq], [[3, 7]], 1, 15)
        nll, _ = crf.objective(np.zeros(15 + 225), packed, 0.0)
        assert nll == pytest.approx(2 * np.log(15))

    def test_nll_matches_brute_force_enumeration(self):
        # length-3 sequence over a reduced 3-tag set: enumerate all 27 paths
        rng = np.random.default_rng(7)
        n_feats, Y, L = 5, 3, 3
        seq = []
        for _ in range(L):
            idx = rng.choice(n_feats, size=2, replace=False).astype(np.int64)
            seq.append((idx, rng.normal(size=2)))
        labels = [1, 0, 2]
        packed = crf.pack([seq], [labels], n_feats, Y)
        params = rng.normal(size=n_feats * Y + Y * Y) * 0.7
        W = params[: n_feats * Y].reshape(n_feats, Y)
        trans = params[n_feats * Y:].reshape(Y, Y)
        emis = crf.emission_scores(packed, W)

        def path_score(path):
            s = sum(emis[t, y] for t, y in enumerate(path))
            return s + sum(trans[a, b] for a, b in zip(path[:-1], path[1:]))

        all_scores = [path_score(p) for p in itertools.product(range(Y), repeat=L)]
        log_z = np.log(np.sum(np.exp(all_scores)))
        expected = -(path_score(labels) - log_z)
        nll, _ = crf.objective(params, packed, 0.0)
        assert nll == pytest.approx(expected, rel=1e-10)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            packed = random_packed(rng)
            n = packed.n_features * packed.n_tags + packed.n_tags ** 2
            params = rng.normal(size=n) * 0.5
            lam = float(rng.uniform(0, 0.5))
            _, grad = crf.objective(params, packed, lam)
            h = 1e-5
            for i in rng.choice(n, size=12, replace=False):
                e = np.zeros(n)
                e[i] = h
                fp, _ = crf.objective(params + e, packed, lam)
                fm, _ = crf.objective(params - e, packed, lam)
                num = (fp - fm) / (2 * h)
                assert abs(grad[i] - num) <= 1e-4 * max(1.0, abs(num))

    def test_forward_backward_agree(self):
        rng = np.random.default_rng(11)
        packed = random_packed(rng, lengths=(4, 2, 5, 1))
        W = rng.normal(size=(packed.n_features, packed.n_tags))
        trans = rng.normal(size=(packed.n_tags, packed.n_tags))
        emis = crf.emission_scores(packed, W)
        scores = emis[packed.token_index]
        scores[~packed.mask] = 0.0
        fw = crf.forward_log_z(scores, packed.mask, trans)
        bw = crf.backward_log_z(scores, packed.mask, trans)
        assert np.abs(fw - bw).max() < 1e-8

    def test_model_level_objective_wrapper(self):
        data = [(extract_features(sentence("clerk")), ["B-Actor"])]
        model, _ = train_crf(data, TrainConfig(max_iter=2))
        nll, grads = crf_objective(model, data)
        assert np.isfinite(nll)
        assert grads["emissions"].shape == model.emissions.shape
        assert grads["transitions"].shape == (15, 15)


class TestViterbi:
    def test_zero_model_decodes_all_o(self):
        model = CrfModel({"bias": 0}, np.zeros((1, 15)), np.zeros((15, 15)), 0.1)
        feats = extract_features(sentence("the", "clerk", "files"))
        assert viterbi_decode(model, feats) == ["O", "O", "O"]

    def test_dominant_emission(self):
        vocab = {"lower=clerk": 0, "bias": 1}
        W = np.zeros((2, 15))
        W[0, IOB_TAGS.index("B-Actor")] = 5.0
        model = CrfModel(vocab, W, np.zeros((15, 15)), 0.1)
        feats = extract_features(sentence("the", "clerk"))
        assert viterbi_decode(model, feats) == ["O", "B-Actor"]

    def test_matches_exhaustive_search_full_tagset(self):
        rng = np.random.default_rng(23)
        Y = 15
        for _ in range(20):
            T = int(rng.integers(1, 5))
            emis = rng.normal(size=(T, Y))
            trans = rng.normal(size=(Y, Y))
            path, score = crf.viterbi(emis, trans)
            best = max(
                crf.path_score(emis, trans, list(p))
                for p in itertools.product(range(Y), repeat=T)
            )
            assert score == pytest.approx(best, abs=1e-9)
            assert crf.path_score(emis, trans, path) == pytest.approx(best, abs=1e-9)

    def test_beats_random_paths(self):
        rng = np.random.default_rng(5)
        emis = rng.normal(size=(6, 15))
        trans = rng.normal(size=(15, 15))
        _, score = crf.viterbi(emis, trans)
        for _ in range(1000):
            path = [int(x) for x in rng.integers(0, 15, size=6)]
            assert crf.path_score(emis, trans, path) <= score + 1e-12

    def test_decoded_tags_always_decodable(self):
        rng = np.random.default_rng(9)
        vocab = {f"f{i}": i for i in range(4)}
        model = CrfModel(vocab, rng.normal(size=(4, 15)),
                         rng.normal(size=(15, 15)), 0.1)
        for _ in range(20):
            feats = [{f"f{int(rng.integers(0, 4))}": 1.0} for _ in range(5)]
            tags = viterbi_decode(model, feats)
            decode_iob([tags])  # must not raise


class TestTraining:
    def _toy_corpus(self):
        docs = []
        sents = [
            (["the", "clerk", "submits", "forms"], ["DT", "NN", "VBZ", "NNS"]),
            (["a", "clerk", "submits", "files"], ["DT", "NN", "VBZ", "NNS"]),
        ]
        mention_rows = [
            [(MentionType.ACTOR, 0, 1, 1), (MentionType.ACTIVITY, 0, 2, 2)],
            [(MentionType.ACTOR, 0, 1, 1), (MentionType.ACTIVITY, 0, 2, 2)],
        ]
        for i, ((words, pos), mentions) in enumerate(zip(sents, mention_rows)):
            docs.append(Document.from_sentences(f"d{i}", [words], pos=[pos],
                                                mentions=mentions))
        return Corpus(tuple(docs))

    def test_separable_toy_problem_reaches_full_accuracy(self):
        corpus = self._toy_corpus()
        data = featurize_corpus(corpus)
        model, result = train_crf(data, TrainConfig(max_iter=80))
        for feats, gold in data:
            assert viterbi_decode(model, feats) == gold
        assert result.final_nll < 1.0

    def test_huge_regularization_zeroes_weights(self):
        data = featurize_corpus(self._toy_corpus())
        model, _ = train_crf(data, TrainConfig(l2=1e6, max_iter=50))
        assert np.abs(model.emissions).max() < 1e-4
        assert np.abs(model.transitions).max() < 1e-4

    def test_gd_optimizer_monotone(self):
        data = featurize_corpus(self._toy_corpus())
        _, result = train_crf(data, TrainConfig(max_iter=30, optimizer="gd"))
        nlls = result.accepted_nlls
        assert all(b <= a + 1e-12 for a, b in zip(nlls, nlls[1:]))

    def test_training_deterministic(self):
        data = featurize_corpus(self._toy_corpus())
        m1, _ = train_crf(data, TrainConfig(max_iter=20))
        m2, _ = train_crf(data, TrainConfig(max_iter=20))
        assert np.array_equal(m1.emissions, m2.emissions)
        assert np.array_equal(m1.transitions, m2.transitions)

    def test_empty_data_rejected(self):
        from proc2bpmn.corpus import DataError
        with pytest.raises(DataError):
            train_crf([])

    def test_predict_mentions_round_trip(self):
        corpus = self._toy_corpus()
        model, _ = train_crf(featurize_corpus(corpus), TrainConfig(max_iter=80))
        mentions = predict_mentions(model, corpus.documents[0])
        assert [(m.type, m.token_start) for m in mentions] == [
            (MentionType.ACTOR, 1), (MentionType.ACTIVITY, 2)
        ]
        assert mentions[0].text == "clerk"


class TestPersistence:
    def test_save_load_round_trip(self, tmp_path):
        data = [(extract_features(sentence("clerk", "files")), ["B-Actor", "O"])]
        model, _ = train_crf(data, TrainConfig(max_iter=10),
                             pos_lexicon={"clerk": "NN"})
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.feature_vocab == model.feature_vocab
        assert np.array_equal(loaded.emissions, model.emissions)
        assert np.array_equal(loaded.transitions, model.transitions)
        assert loaded.pos_lexicon == {"clerk": "NN"}
        feats = extract_features(sentence("clerk"))
        assert viterbi_decode(loaded, feats) == viterbi_decode(model, feats)

    def test_mismatched_tag_count_rejected(self, tmp_path):
        import json
        path = tmp_path / "bad.json"
        payload = {
            "format": "proc2bpmn-crf", "version": 1,
            "tags": ["O", "B-Actor"], "l2": 0.1, "feature_vocab": {"bias": 0},
            "emissions": [[0.0, 0.0]], "transitions": [[0.0, 0.0], [0.0, 0.0]],
        }
        path.write_text(json.dumps(payload))
        with pytest.raises(ModelError, match="tags"):
            load_model(path)

    def test_garbage_file_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("not json")
        with pytest.raises(ModelError):
            load_model(path)


class TestEmbeddingsFile:
    def test_load(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("clerk 0.5 1.0\nform -1 2\n")
        table = load_embeddings(path)
        assert np.allclose(table["clerk"], [0.5, 1.0])
        assert np.allclose(table["form"], [-1.0, 2.0])

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "vec.txt"
        path.write_text("clerk\n")
        with pytest.raises(ModelError):
            load_embeddings(path)
