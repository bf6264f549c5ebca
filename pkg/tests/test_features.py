import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from devlid.features import (
    CharNgram,
    FeatureError,
    FeatureSpec,
    PhonemeProfile,
    Profile,
    Weighting,
    WordNgram,
    char_ngrams,
    fit_vocabulary,
    phoneme_profile,
    vectorize,
    vectorize_many,
    word_ngrams,
)

from oracles import enumerate_char_windows, enumerate_word_windows, tfidf_oracle

words = st.lists(st.text(alphabet="कखगघाीुं", min_size=1, max_size=7), min_size=0, max_size=8)


class TestNgrams:
    def test_char_bigrams(self):
        assert char_ngrams(["नदी"], 2) == ["नद", "दी"]

    def test_char_unigrams_are_code_points(self):
        assert char_ngrams(["नदी"], 1) == ["न", "द", "ी"]

    def test_short_token_emits_nothing(self):
        assert char_ngrams(["ना"], 3) == []

    def test_no_cross_word_windows(self):
        assert char_ngrams(["कख", "ग"], 2) == ["कख"]

    def test_word_bigrams(self):
        assert word_ngrams(["क", "ख", "ग"], 2) == ["क ख", "ख ग"]

    def test_word_unigram_identity(self):
        assert word_ngrams(["क"], 1) == ["क"]

    def test_short_document(self):
        assert word_ngrams(["क", "ख"], 3) == []

    @pytest.mark.parametrize("fn", [char_ngrams, word_ngrams])
    def test_zero_rejected(self, fn):
        with pytest.raises(FeatureError):
            fn(["क"], 0)

    @settings(max_examples=60)
    @given(words, st.integers(1, 5))
    def test_match_exhaustive_enumeration(self, tokens, n):
        from collections import Counter

        assert Counter(char_ngrams(tokens, n)) == enumerate_char_windows(tokens, n)
        assert Counter(word_ngrams(tokens, n)) == enumerate_word_windows(tokens, n)


class TestPhonemeProfile:
    def test_consonants_only(self):
        assert phoneme_profile(["का"], Profile.CONSONANTS) == ["क"]

    def test_phonemes_plus_matras(self):
        assert phoneme_profile(["का"], Profile.PHONEMES_PLUS_MATRAS) == ["क", "ा"]

    def test_matras_exclude_independent_vowels(self):
        assert phoneme_profile(["अ"], Profile.MATRAS) == []

    def test_matras_include_signs(self):
        assert phoneme_profile(["कं"], Profile.MATRAS) == ["ं"]

    def test_phonemes(self):
        assert phoneme_profile(["अका"], Profile.PHONEMES) == ["अ", "क"]


class TestSpecParsing:
    def test_shorthand_names(self):
        assert FeatureSpec.parse("CT+WT") == FeatureSpec.parse("c3,w3")
        assert FeatureSpec.parse("CU+CB+CT").components == (CharNgram(1), CharNgram(2), CharNgram(3))

    def test_round_trip(self):
        spec = FeatureSpec((WordNgram(3), PhonemeProfile(Profile.MATRAS), CharNgram(3)), Weighting.TFIDF, None, 2)
        assert FeatureSpec.parse(str(spec)) == spec

    def test_canonical_atom_order(self):
        assert str(FeatureSpec.parse("w3,c3")).startswith("c3,w3;")

    @pytest.mark.parametrize("bad", ["", "c6", "x2", "c3;weighting=bogus", "c3,c3", "c3;foo=1"])
    def test_rejects(self, bad):
        with pytest.raises(FeatureError):
            FeatureSpec.parse(bad)


def spec_of(*atoms, **kw):
    kw.setdefault("max_features", None)
    return FeatureSpec(tuple(atoms), **kw)


DOCS = [["क", "ख"], ["क", "ग"]]


class TestVocabulary:
    def test_direct_count(self):
        v = fit_vocabulary(DOCS, spec_of(WordNgram(1)))
        assert [t for _, t in v.terms] == ["क", "ख", "ग"]
        assert list(v.doc_freq) == [2, 1, 1]
        assert v.n_docs == 2

    def test_min_doc_freq(self):
        v = fit_vocabulary(DOCS, spec_of(WordNgram(1), min_doc_freq=2))
        assert [t for _, t in v.terms] == ["क"]

    def test_max_features_tie_break(self):
        # क has frequency 2; ख and ग tie at 1 and ख < ग by code point
        assert "ख" < "ग"
        v = fit_vocabulary(DOCS, spec_of(WordNgram(1), max_features=2))
        assert [t for _, t in v.terms] == ["क", "ख"]

    def test_empty_vocabulary_fatal(self):
        with pytest.raises(FeatureError):
            fit_vocabulary([["क"]], spec_of(WordNgram(2)))

    def test_combined_blocks_ordered_by_atom(self):
        v = fit_vocabulary([["कख", "ग"]], spec_of(WordNgram(1), CharNgram(2)))
        assert [tag for tag, _ in v.terms] == ["c2", "w1", "w1"]

    @settings(max_examples=30)
    @given(st.lists(words.filter(bool), min_size=1, max_size=5), st.randoms())
    def test_order_independent(self, docs, rnd):
        spec = spec_of(CharNgram(2), WordNgram(1), max_features=6)
        shuffled = list(docs)
        rnd.shuffle(shuffled)
        a, b = fit_vocabulary(docs, spec), fit_vocabulary(shuffled, spec)
        assert a.terms == b.terms
        assert list(a.doc_freq) == list(b.doc_freq)
        assert all(1 <= df <= a.n_docs for df in a.doc_freq)


class TestVectorize:
    def test_counts(self):
        v = fit_vocabulary([["क"]], spec_of(WordNgram(1), weighting=Weighting.COUNTS))
        assert vectorize(["क", "क"], v).to_dense().tolist() == [2.0]

    def test_relative_frequency_ignores_oov(self):
        v = fit_vocabulary([["क"]], spec_of(WordNgram(1), weighting=Weighting.RELFREQ))
        assert vectorize(["क", "ख"], v).to_dense().tolist() == [1.0]

    def test_relative_frequency_all_oov_is_zero(self):
        v = fit_vocabulary([["क"]], spec_of(WordNgram(1)))
        fv = vectorize(["ख"], v)
        assert len(fv.indices) == 0 and fv.dim == 1

    def test_tfidf_worked_example(self):
        train = [["क", "ख"], ["क"], ["क"]]
        v = fit_vocabulary(train, spec_of(WordNgram(1), weighting=Weighting.TFIDF))
        got = vectorize(["क", "क", "ख"], v).to_dense()
        raw = np.array([2 * (math.log(4 / 4) + 1), 1 * (math.log(4 / 2) + 1)])
        assert raw[1] == pytest.approx(1.6931, abs=1e-4)
        np.testing.assert_allclose(got, raw / np.linalg.norm(raw), atol=1e-12)
        np.testing.assert_allclose(got, [0.7632, 0.6461], atol=1e-4)

    def test_idf_strictly_decreasing_in_df(self):
        v = fit_vocabulary([["क", "ख", "ग"], ["क", "ख"], ["क"]], spec_of(WordNgram(1)))
        order = np.argsort(v.doc_freq)
        assert np.all(np.diff(v.idf[order]) < 0)

    @settings(max_examples=40)
    @given(st.lists(words.filter(bool), min_size=1, max_size=5), words)
    def test_tfidf_matches_oracle(self, train, doc):
        spec = spec_of(CharNgram(2), WordNgram(1), weighting=Weighting.TFIDF)
        vocab = fit_vocabulary(train, spec)
        got = vectorize(doc, vocab)
        terms_of = lambda toks: [("c2", g) for g in char_ngrams(toks, 2)] + [("w1", w) for w in toks]  # noqa: E731
        want = tfidf_oracle(train, doc, terms_of)
        assert {vocab.terms[i]: val for i, val in got.as_dict().items()} == pytest.approx(want, abs=1e-9)
        norm = np.linalg.norm(got.values)
        assert norm == pytest.approx(1.0, abs=1e-9) or norm == 0.0

    @settings(max_examples=30)
    @given(st.lists(words.filter(bool), min_size=1, max_size=5), words)
    def test_count_conservation(self, train, doc):
        spec = spec_of(CharNgram(2), WordNgram(1), weighting=Weighting.COUNTS)
        vocab = fit_vocabulary(train, spec)
        fv = vectorize(doc, vocab)
        in_vocab = sum(1 for g in char_ngrams(doc, 2) if ("c2", g) in vocab.index)
        in_vocab += sum(1 for w in doc if ("w1", w) in vocab.index)
        assert fv.values.sum() == in_vocab
        assert np.all(fv.values > 0)

    def test_vectorize_many_matches_rows(self):
        vocab = fit_vocabulary(DOCS, spec_of(WordNgram(1)))
        X = vectorize_many(DOCS, vocab).toarray()
        for row, doc in zip(X, DOCS):
            np.testing.assert_array_equal(row, vectorize(doc, vocab).to_dense())
