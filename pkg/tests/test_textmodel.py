import numpy as np
import pytest

from predfuse.errors import ValidationError
from predfuse.textmodel import (LogisticModel, Vocabulary, build_vocab, encode,
                                load_corpus, logistic_gradient, logistic_loss,
                                predict_proba, tokenize, train_logistic)


class TestTokenizeAndVocab:
    def test_lowercases_and_splits_on_punctuation(self):
        assert tokenize("Good, GOOD!") == ["good", "good"]

    def test_frequency_then_lexicographic(self):
        vocab = build_vocab(["a b", "a"], v_size=1)
        assert vocab.tokens == ("a",)

    def test_v_larger_than_distinct_token_count(self):
        vocab = build_vocab(["b a", "b c"], v_size=10)
        assert vocab.tokens == ("b", "a", "c")  # b twice, ties a < c

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValidationError):
            build_vocab(["", "  "], v_size=3)


class TestEncode:
    def test_empty_document_is_zero_vector(self):
        vocab = Vocabulary(("x", "y"))
        np.testing.assert_array_equal(encode("", vocab), [0.0, 0.0])

    def test_multi_hot_not_counts(self):
        vocab = Vocabulary(("x",))
        np.testing.assert_array_equal(encode("x x x", vocab), encode("x", vocab))

    def test_unknown_tokens_ignored(self):
        vocab = Vocabulary(("y", "z"))
        np.testing.assert_array_equal(encode("x y", vocab), [1.0, 0.0])


class TestTrain:
    def test_separable_toy_corpus_fits_exactly(self):
        docs = ["good film", "good plot twist", "bad film", "plot was bad"]
        labels = [1, 1, 0, 0]
        model = train_logistic(docs, labels, v_size=10, epochs=300, lr=0.1,
                               seed=0)
        preds = [predict_proba(model, d) for d in docs]
        assert [int(p >= 0.5) for p in preds] == labels

    def test_zero_initialised_model_predicts_half(self):
        vocab = Vocabulary(("a", "b"))
        model = LogisticModel(weights=np.zeros(2), bias=0.0, vocab=vocab)
        assert predict_proba(model, "a b") == 0.5
        assert predict_proba(model, "unseen words") == 0.5

    def test_deterministic_given_seed(self):
        docs = ["alpha beta", "beta gamma", "gamma delta", "delta alpha"] * 3
        labels = [1, 0, 1, 0] * 3
        a = train_logistic(docs, labels, v_size=6, epochs=20, seed=4)
        b = train_logistic(docs, labels, v_size=6, epochs=20, seed=4)
        np.testing.assert_array_equal(a.weights, b.weights)
        assert a.bias == b.bias

    def test_probabilities_strictly_inside_unit_interval(self):
        docs = ["yes", "no", "yes yes", "no no"]
        model = train_logistic(docs, [1, 0, 1, 0], v_size=4, epochs=50, seed=1)
        for d in docs + ["other"]:
            assert 0.0 < predict_proba(model, d) < 1.0

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValidationError):
            train_logistic(["a"], [1, 0], v_size=2)


class TestLogisticGradient:
    def test_matches_finite_differences(self, rng):
        worst = 0.0
        for _ in range(20):
            n, v = int(rng.integers(4, 40)), int(rng.integers(1, 6))
            x = rng.integers(0, 2, size=(n, v)).astype(float)
            u = rng.integers(0, 2, size=n).astype(float)
            w = rng.normal(0, 1, size=v)
            bias = float(rng.normal())
            analytic = logistic_gradient(w, bias, x, u)
            h = 1e-5
            fd = []
            for i in range(v):
                wp, wm = w.copy(), w.copy()
                wp[i] += h
                wm[i] -= h
                fd.append((logistic_loss(wp, bias, x, u)
                           - logistic_loss(wm, bias, x, u)) / (2 * h))
            fd.append((logistic_loss(w, bias + h, x, u)
                       - logistic_loss(w, bias - h, x, u)) / (2 * h))
            fd = np.asarray(fd)
            worst = max(worst, np.linalg.norm(analytic - fd)
                        / max(np.linalg.norm(fd), 1e-8))
        assert worst < 1e-4


class TestCorpusFile:
    def test_one_document_per_line(self, tmp_path):
        path = tmp_path / "corpus.txt"
        path.write_text("first doc\nsecond doc\n\nfourth doc\n", encoding="utf-8")
        assert load_corpus(path) == ["first doc", "second doc", "", "fourth doc"]
