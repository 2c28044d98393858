import math

import numpy as np
import pytest

from confguard.concepts.features import (
    CHAR_NGRAM_RANGE,
    FeatureConfig,
    NlpFeaturizer,
    TfidfFeaturizer,
    char_ngrams,
    nlp_features,
)
from confguard.errors import ValidationError

TOY = [["a", "b"], ["a", "c"], ["a", "d"]]


def test_char_ngram_range_is_fixed():
    assert CHAR_NGRAM_RANGE == (2, 4)
    assert char_ngrams("ab") == ["ab"]
    assert char_ngrams("abcd") == ["ab", "bc", "cd", "abc", "bcd", "abcd"]
    assert char_ngrams("x") == []


def test_toy_idf_values():
    model = TfidfFeaturizer(mode="word").fit(TOY)
    # oracle: hand evaluation of idf(t) = ln((1+N)/(1+df)) + 1
    n = 3
    assert model.idf_[model.vocabulary_["w=a"]] == pytest.approx(math.log((1 + n) / (1 + 3)) + 1, abs=1e-12)
    assert model.idf_[model.vocabulary_["w=b"]] == pytest.approx(math.log((1 + n) / (1 + 1)) + 1, abs=1e-12)


def test_single_document_uniform_idf():
    model = TfidfFeaturizer(mode="word").fit([["x", "y", "z"]])
    assert np.allclose(model.idf_, 1.0)


def test_word_char_mode_on_short_token():
    model = TfidfFeaturizer(mode="word+char").fit([["ab"]])
    assert set(model.vocabulary_) == {"w=ab", "c=ab"}


def test_transform_matches_hand_computation():
    model = TfidfFeaturizer(mode="word").fit(TOY)
    vec = model.transform([["a", "b"]]).toarray()[0]
    idf_a = 1.0
    idf_b = math.log(4 / 2) + 1
    raw = np.zeros(len(model.vocabulary_))
    raw[model.vocabulary_["w=a"]] = idf_a
    raw[model.vocabulary_["w=b"]] = idf_b
    expected = raw / np.linalg.norm(raw)
    assert np.abs(vec - expected).max() < 1e-9


def test_oov_transforms_to_zero_vector():
    model = TfidfFeaturizer(mode="word").fit(TOY)
    vec = model.transform([["zz", "qq"]]).toarray()[0]
    assert not vec.any()


def test_single_known_term_is_unit_vector():
    model = TfidfFeaturizer(mode="word").fit(TOY)
    vec = model.transform([["b"]]).toarray()[0]
    assert np.count_nonzero(vec) == 1
    assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-12)


def test_all_rows_have_unit_or_zero_norm(fixtures_dir):
    from confguard.concepts import load_labeled_csv, preprocess

    texts, _ = load_labeled_csv(fixtures_dir / "dataset/labeled_sentences.csv")
    tokens = [preprocess(t) for t in texts]
    model = TfidfFeaturizer(mode="word+char").fit(tokens)
    matrix = model.transform(tokens + [["zzzz-unknown"]])
    norms = np.sqrt(np.asarray(matrix.multiply(matrix).sum(axis=1)).ravel())
    assert np.all((np.abs(norms - 1.0) < 1e-9) | (norms == 0.0))


def test_combined_vocabulary_is_disjoint_union():
    corpus = [["alpha", "beta"], ["beta", "gamma"]]
    word = set(TfidfFeaturizer(mode="word").fit(corpus).vocabulary_)
    char = set(TfidfFeaturizer(mode="char").fit(corpus).vocabulary_)
    both = set(TfidfFeaturizer(mode="word+char").fit(corpus).vocabulary_)
    assert word.isdisjoint(char)
    assert both == word | char


def test_idf_scaling_leaves_vectors_unchanged():
    corpus = [["alpha", "beta"], ["beta", "gamma"], ["alpha", "gamma", "delta"]]
    model = TfidfFeaturizer(mode="word+char").fit(corpus)
    base = model.transform(corpus).toarray()
    model.idf_ = model.idf_ * 7.5
    scaled = model.transform(corpus).toarray()
    assert np.allclose(base, scaled, atol=1e-12)


def test_min_df_filters_vocabulary():
    model = TfidfFeaturizer(mode="word", min_df=2).fit(TOY)
    assert set(model.vocabulary_) == {"w=a"}


def test_all_empty_corpus_rejected():
    with pytest.raises(ValidationError):
        TfidfFeaturizer(mode="word").fit([[], []])


def test_unknown_mode_rejected():
    with pytest.raises(ValidationError):
        TfidfFeaturizer(mode="bigram").fit(TOY)


def test_transform_before_fit_rejected():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        TfidfFeaturizer().transform(TOY)


def test_sklearn_get_params_round_trip():
    model = TfidfFeaturizer(mode="char", min_df=3)
    assert model.get_params() == {"mode": "char", "min_df": 3}
    model.set_params(min_df=1)
    assert model.min_df == 1


def test_nlp_features_empty():
    vec = nlp_features("")
    assert vec.shape == (8,)
    assert not vec.any()


def test_nlp_features_counts():
    vec = nlp_features("Edit the file")
    assert vec[0] == 3  # words
    assert vec[1] == 13  # characters
    assert vec[7] == pytest.approx(13 / 4)


def test_nlp_features_pronouns():
    assert nlp_features("he she it")[6] == 3


def test_nlp_suffix_heuristics():
    vec = nlp_features("gracefully restartification")
    assert vec[5] >= 1  # -ly adverb
    assert vec[2] >= 1  # -tion noun


def test_nlp_featurizer_matrix():
    matrix = NlpFeaturizer().fit(["a b"]).transform(["Edit the file", ""])
    assert matrix.shape == (2, 8)
    assert matrix.toarray()[0][0] == 3


def test_feature_config_validation():
    with pytest.raises(ValidationError):
        FeatureConfig(mode="nope")
    with pytest.raises(ValidationError):
        FeatureConfig(min_df=0)
