import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from devlid.corpus import Document, LabeledCorpus
from devlid.features import FeatureError, FeatureSpec, FeatureVector, Weighting, WordNgram, fit_vocabulary, vectorize
from devlid.similarity import Measure, cosine, euclidean, jaccard, language_pair_matrix

fv = FeatureVector.from_dense


class TestCosine:
    def test_identity(self):
        assert cosine(fv([1, 0, 2]), fv([1, 0, 2])) == pytest.approx(1.0)

    def test_disjoint(self):
        assert cosine(fv([1, 0, 0]), fv([0, 3, 0])) == 0.0

    def test_arithmetic(self):
        # (1*3 + 2*2 + 3*1) / (sqrt(14) * sqrt(14))
        assert cosine(fv([1, 2, 3]), fv([3, 2, 1])) == pytest.approx(10 / 14, abs=1e-12)
        assert 10 / 14 == pytest.approx(0.714286, abs=1e-6)

    def test_zero_vector(self):
        assert cosine(fv([0, 0]), fv([1, 1])) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(FeatureError):
            cosine(fv([1, 2]), fv([1, 2, 3]))


class TestEuclidean:
    def test_identity(self):
        assert euclidean(fv([1, 2]), fv([1, 2])) == 0.0

    def test_345(self):
        assert euclidean(fv([0, 0]), fv([3, 4])) == 5.0

    def test_arithmetic(self):
        assert euclidean(fv([1, 1, 1]), fv([2, 3, 4])) == pytest.approx(math.sqrt(14), abs=1e-12)
        assert math.sqrt(14) == pytest.approx(3.741657, abs=1e-6)

    def test_dimension_mismatch(self):
        with pytest.raises(FeatureError):
            euclidean(fv([1]), fv([1, 2]))


class TestJaccard:
    def test_identity(self):
        assert jaccard({"क"}, {"क"}) == 1.0

    def test_half(self):
        assert jaccard({"क", "ख", "ग"}, {"ख", "ग", "घ"}) == 0.5

    def test_disjoint(self):
        assert jaccard({"क"}, {"ख"}) == 0.0

    def test_both_empty(self):
        assert jaccard(set(), set()) == 1.0


sparse_vec = st.lists(st.one_of(st.just(0.0), st.floats(0.0, 10.0)), min_size=6, max_size=6)


@settings(max_examples=80)
@given(sparse_vec, sparse_vec, st.sampled_from([0.5, 3.0]))
def test_cosine_axioms(u, v, alpha):
    a, b = fv(u), fv(v)
    c = cosine(a, b)
    assert 0.0 <= c <= 1.0
    assert c == pytest.approx(cosine(b, a), abs=1e-12)
    assert cosine(fv(np.array(u) * alpha), b) == pytest.approx(c, abs=1e-9)


@settings(max_examples=80)
@given(sparse_vec, sparse_vec, sparse_vec)
def test_triangle_inequality(u, v, w):
    a, b, c = fv(u), fv(v), fv(w)
    assert euclidean(a, c) <= euclidean(a, b) + euclidean(b, c) + 1e-9


def corpus_from(spec: dict[str, list[str]]) -> LabeledCorpus:
    docs = []
    for lang, texts in spec.items():
        for i, t in enumerate(texts):
            docs.append(Document.from_text(f"{lang}/{i}", lang, t))
    return LabeledCorpus(docs)


class TestLanguagePairMatrix:
    def test_identical_documents_cosine(self):
        m = language_pair_matrix(corpus_from({"a": ["क ख"], "b": ["क ख"]}), "cosine")
        np.testing.assert_allclose(m.values, [[1.0, 1.0], [1.0, 1.0]])

    def test_disjoint_jaccard(self):
        m = language_pair_matrix(corpus_from({"a": ["क ख"], "b": ["ग घ"]}), Measure.JACCARD)
        np.testing.assert_array_equal(m.values, [[1.0, 0.0], [0.0, 1.0]])

    @pytest.mark.parametrize("measure", list(Measure))
    def test_mean_over_all_cross_pairs(self, measure):
        corpus = corpus_from({"a": ["क क ख", "ख ग"], "b": ["क ग ग", "घ"], "c": ["घ घ क"]})
        spec = FeatureSpec((WordNgram(1),), weighting=Weighting.COUNTS, max_features=None)
        vocab = fit_vocabulary(corpus, spec)
        groups = corpus.by_label()

        def pair(d1, d2):
            if measure is Measure.JACCARD:
                return jaccard(set(d1.tokens), set(d2.tokens))
            f = cosine if measure is Measure.COSINE else euclidean
            return f(vectorize(d1, vocab), vectorize(d2, vocab))

        m = language_pair_matrix(corpus, measure)
        for i, j in itertools.permutations(range(3), 2):
            li, lj = corpus.labels[i], corpus.labels[j]
            want = np.mean([pair(x, y) for x in groups[li] for y in groups[lj]])
            assert m.values[i, j] == pytest.approx(want, abs=1e-9)
        diag = 0.0 if measure is Measure.EUCLIDEAN else 1.0
        np.testing.assert_array_equal(np.diag(m.values), diag)
        np.testing.assert_array_equal(m.values, m.values.T)

    def test_tsv_precision(self):
        corpus = corpus_from({"a": ["क ख"], "b": ["क ग"]})
        cos = language_pair_matrix(corpus, "cosine").to_tsv().splitlines()
        assert cos[0] == "\ta\tb"
        assert cos[1] == "a\t1.000\t0.500"
        euc = language_pair_matrix(corpus, "euclidean").to_tsv().splitlines()
        assert euc[1] == f"a\t0.00\t{math.sqrt(2):.2f}"
