from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from devlid.classify import TrainConfig
from devlid.corpus import CorpusError, Document, LabeledCorpus
from devlid.evaluation import (
    ConfusionMatrix,
    EvalError,
    confusion,
    fmt_half_up,
    metrics,
    micro_average,
    round_half_up,
    run_experiment,
    split,
    weighted_average,
)
from devlid.features import FeatureSpec
from devlid.synthetic import synthetic_corpus


def tiny_corpus(n_labels, per_label):
    docs = [
        Document.from_text(f"l{i}/d{j}", f"l{i}", "क ख")
        for i in range(n_labels)
        for j in range(per_label)
    ]
    return LabeledCorpus(docs)


class TestRounding:
    @pytest.mark.parametrize("x,expected", [(0.125, "0.13"), (0.135, "0.14"), (0.8825, "0.88"), (2.5, "2.50")])
    def test_half_up(self, x, expected):
        assert fmt_half_up(x, 2) == expected

    def test_float_value(self):
        assert round_half_up(0.005, 2) == 0.01


class TestSplit:
    def test_floor_per_label(self):
        train, test = split(tiny_corpus(10, 150), 0.25, seed=0)
        counts = Counter(d.language for d in test.documents)
        assert set(counts.values()) == {37}
        assert len(test) == 370 and len(train) == 1130

    def test_minimum_one(self):
        train, test = split(tiny_corpus(3, 2), 0.5, seed=0)
        assert len(train) == 3 and len(test) == 3
        assert sorted(d.language for d in test.documents) == ["l0", "l1", "l2"]

    def test_disjoint_cover(self):
        corpus = tiny_corpus(4, 9)
        train, test = split(corpus, 0.3, seed=5)
        a, b = {d.id for d in train.documents}, {d.id for d in test.documents}
        assert not a & b and a | b == {d.id for d in corpus.documents}
        assert train.labels == test.labels == corpus.labels

    def test_deterministic(self):
        corpus = tiny_corpus(4, 20)
        ids = lambda c: [d.id for d in c.documents]  # noqa: E731
        assert ids(split(corpus, 0.25, 3)[1]) == ids(split(corpus, 0.25, 3)[1])
        assert ids(split(corpus, 0.25, 3)[1]) != ids(split(corpus, 0.25, 4)[1])

    def test_singleton_label_rejected(self):
        with pytest.raises(EvalError):
            split(tiny_corpus(2, 1), 0.25, 0)

    @pytest.mark.parametrize("frac", [0.0, 1.0, -0.1])
    def test_bad_fraction(self, frac):
        with pytest.raises(EvalError):
            split(tiny_corpus(2, 4), frac, 0)


class TestConfusion:
    def test_tally(self):
        cm = confusion(["A", "A", "B"], ["A", "B", "B"], ["A", "B"])
        np.testing.assert_array_equal(cm.counts, [[1, 1], [0, 1]])

    def test_all_correct_is_diagonal(self):
        cm = confusion(list("ABCA"), list("ABCA"), "ABC")
        np.testing.assert_array_equal(cm.counts, np.diag([2, 1, 1]))

    def test_empty(self):
        assert confusion([], [], "AB").total == 0

    def test_errors(self):
        with pytest.raises(EvalError):
            confusion(["A"], [], "AB")
        with pytest.raises(EvalError):
            confusion(["A"], ["Z"], "AB")

    def test_tsv_round_trip(self, fixtures_dir):
        text = (fixtures_dir / "svm_char_word_confusion.tsv").read_text(encoding="utf-8")
        cm = ConfusionMatrix.from_tsv(text)
        assert cm.total == 375
        again = ConfusionMatrix.from_tsv(cm.to_tsv())
        assert again.labels == cm.labels and np.array_equal(again.counts, cm.counts)

    @given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=40))
    def test_counts_partition_total(self, pairs):
        labels = "ABCD"
        cm = confusion([labels[g] for g, _ in pairs], [labels[p] for _, p in pairs], labels)
        assert np.all(cm.tp + cm.fp + cm.fn + cm.tn == cm.total)
        assert np.all(cm.tn >= 0)


class TestMetrics:
    def test_perfect(self):
        rep = metrics(ConfusionMatrix(("A", "B"), [[1, 0], [0, 1]]))
        assert rep.accuracy == 1.0 and rep.macro == (1.0, 1.0, 1.0)

    def test_svm_fixture_angika(self, fixtures_dir):
        cm = ConfusionMatrix.from_tsv((fixtures_dir / "svm_char_word_confusion.tsv").read_text(encoding="utf-8"))
        p, r, f = metrics(cm).per_class("Angika")
        assert p == pytest.approx(34 / 35) and r == pytest.approx(34 / 38)
        assert [fmt_half_up(v, 2) for v in (p, r, f)] == ["0.97", "0.89", "0.93"]

    def test_cnn_fixture_garhwali(self, fixtures_dir):
        cm = ConfusionMatrix.from_tsv((fixtures_dir / "cnn_confusion.tsv").read_text(encoding="utf-8"))
        p, r, f = metrics(cm).per_class("Garhwali")
        assert r == 36 / 64
        assert [fmt_half_up(v, 2) for v in (p, r, f)] == ["0.97", "0.56", "0.71"]

    def test_never_predicted_class_scores_zero(self):
        rep = metrics(ConfusionMatrix(("A", "B"), [[2, 0], [1, 0]]))
        assert rep.per_class("B") == (0.0, 0.0, 0.0)

    def test_empty_matrix_rejected(self):
        with pytest.raises(EvalError):
            metrics(ConfusionMatrix(("A",), [[0]]))

    def test_micro_equals_accuracy(self, fixtures_dir):
        cm = ConfusionMatrix.from_tsv((fixtures_dir / "cnn_confusion.tsv").read_text(encoding="utf-8"))
        rep = metrics(cm)
        assert micro_average(cm) == pytest.approx((rep.accuracy,) * 3)
        w = weighted_average(rep, cm)
        assert w[1] == pytest.approx(rep.accuracy)

    def test_tsv_layout(self):
        rep = metrics(ConfusionMatrix(("A", "B"), [[2, 1], [0, 3]]))
        lines = rep.to_tsv().splitlines()
        assert lines[0] == "class\tprecision\trecall\tf1"
        assert lines[1] == "A\t1.0000\t0.6667\t0.8000"
        assert lines[3].startswith("MACRO\t")
        assert lines[4] == "accuracy=0.8333"

    @given(st.lists(st.integers(0, 2), min_size=1, max_size=30))
    def test_self_confusion_is_perfect(self, golds):
        labs = [("A", "B", "C")[g] for g in golds]
        assert metrics(confusion(labs, labs, "ABC")).accuracy == 1.0

    @given(
        st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=40),
        st.permutations(range(4)),
    )
    def test_label_permutation_invariance(self, pairs, perm):
        labels = ["A", "B", "C", "D"]
        golds = [labels[g] for g, _ in pairs]
        preds = [labels[p] for _, p in pairs]
        base = metrics(confusion(golds, preds, labels))
        permuted_labels = [labels[i] for i in perm]
        other = metrics(confusion(golds, preds, permuted_labels))
        assert other.accuracy == base.accuracy
        for lab in labels:
            assert other.per_class(lab) == base.per_class(lab)


@pytest.fixture(scope="module")
def corpus():
    return synthetic_corpus(n_languages=4, docs_per_language=20, tokens_per_doc=30, seed=2)


class TestRunExperiment:
    def test_separable_svm(self, corpus):
        res = run_experiment(corpus, FeatureSpec.parse("c2"), "svm", TrainConfig(seed=0))
        assert res.report.accuracy == 1.0
        assert res.confusion.total == 4 * 5

    def test_deterministic(self, corpus):
        spec = FeatureSpec.parse("c2,w1;weighting=tfidf")
        a = run_experiment(corpus, spec, "knn", TrainConfig(seed=4))
        b = run_experiment(corpus, spec, "knn", TrainConfig(seed=4))
        assert a.report.to_tsv() == b.report.to_tsv()
        assert a.confusion.to_tsv() == b.confusion.to_tsv()

    def test_no_test_leakage(self, corpus):
        res = run_experiment(corpus, FeatureSpec.parse("w1;min_df=1"), "gnb", TrainConfig(seed=1))
        train_words = {t for d in res.train.documents for t in d.tokens}
        test_only = {t for d in res.test.documents for t in d.tokens} - train_words
        vocab_words = {term for _, term in res.vocabulary.terms}
        assert vocab_words <= train_words
        assert not vocab_words & test_only
        assert res.vocabulary.n_docs == len(res.train)

    def test_single_language_rejected(self):
        with pytest.raises(CorpusError):
            run_experiment(tiny_corpus(1, 10), FeatureSpec.parse("c1"), "svm")
