"""Feature extraction: TF-IDF over word and character n-gram families,
plus a small dense set of surface NLP statistics."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ..errors import ValidationError

# Character n-grams are drawn per token; vocabulary growth flattens out
# past length 4, so the range is fixed.
CHAR_NGRAM_RANGE = (2, 4)

FEATURE_MODES = ("word", "char", "word+char", "nlp")

NLP_FEATURE_NAMES = (
    "word_count",
    "char_count",
    "noun_count",
    "verb_count",
    "adjective_count",
    "adverb_count",
    "pronoun_count",
    "word_density",
)


@dataclass
class FeatureConfig:
    mode: str = "word+char"
    min_df: int = 1

    def __post_init__(self) -> None:
        if self.mode not in FEATURE_MODES:
            raise ValidationError(f"unknown feature mode {self.mode!r}")
        if self.min_df < 1:
            raise ValidationError("min_df must be >= 1")

    def to_dict(self) -> dict:
        return {"mode": self.mode, "min_df": self.min_df}

    @classmethod
    def from_dict(cls, raw: dict) -> "FeatureConfig":
        return cls(mode=str(raw["mode"]), min_df=int(raw["min_df"]))


def char_ngrams(token: str) -> list[str]:
    grams: list[str] = []
    lo, hi = CHAR_NGRAM_RANGE
    for n in range(lo, hi + 1):
        grams.extend(token[i : i + n] for i in range(len(token) - n + 1))
    return grams


def _terms(tokens: list[str], mode: str) -> list[str]:
    terms: list[str] = []
    if mode in ("word", "word+char"):
        terms.extend("w=" + t for t in tokens)
    if mode in ("char", "word+char"):
        for token in tokens:
            terms.extend("c=" + g for g in char_ngrams(token))
    return terms


class TfidfFeaturizer(BaseEstimator, TransformerMixin):
    """TF-IDF with smoothed idf, raw-count tf and L2 row normalization.

    idf(t) = ln((1 + N) / (1 + df(t))) + 1 with N the number of fitted
    documents. Word terms and character n-gram terms live in the same
    vocabulary under distinct "w=" / "c=" prefixes.
    """

    def __init__(self, mode: str = "word+char", min_df: int = 1):
        self.mode = mode
        self.min_df = min_df

    def fit(self, X: list[list[str]], y=None) -> "TfidfFeaturizer":
        config = FeatureConfig(self.mode, self.min_df)
        if config.mode == "nlp":
            raise ValidationError("nlp mode carries no TF-IDF vocabulary; use NlpFeaturizer")
        if not any(tokens for tokens in X):
            raise ValidationError("cannot fit TF-IDF on an all-empty corpus")
        df: Counter[str] = Counter()
        for tokens in X:
            df.update(set(_terms(tokens, config.mode)))
        kept = sorted(t for t, c in df.items() if c >= config.min_df)
        if not kept:
            raise ValidationError("min_df filtered out the entire vocabulary")
        self.vocabulary_ = {term: i for i, term in enumerate(kept)}
        n_docs = len(X)
        self.idf_ = np.array(
            [math.log((1 + n_docs) / (1 + df[t])) + 1.0 for t in kept], dtype=np.float64
        )
        self.n_docs_ = n_docs
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "vocabulary_"):
            raise NotFittedError("TfidfFeaturizer is not fitted")

    def transform(self, X: list[list[str]]) -> sparse.csr_matrix:
        self._check_fitted()
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        for tokens in X:
            counts = Counter(_terms(tokens, self.mode))
            row = sorted(
                (self.vocabulary_[t], tf) for t, tf in counts.items() if t in self.vocabulary_
            )
            values = np.array([tf * self.idf_[col] for col, tf in row], dtype=np.float64)
            norm = math.sqrt(float(np.dot(values, values)))
            if norm > 0:
                values /= norm
            indices.extend(col for col, _ in row)
            data.extend(values)
            indptr.append(len(indices))
        return sparse.csr_matrix(
            (np.array(data), np.array(indices, dtype=np.int32), np.array(indptr, dtype=np.int32)),
            shape=(len(X), len(self.vocabulary_)),
        )


@lru_cache(maxsize=1)
def _pos_lexicon() -> dict[str, str]:
    text = resources.files("confguard.data").joinpath("pos_lexicon.tsv").read_text("utf-8")
    lexicon: dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        word, tag = line.split("\t")
        lexicon[word.strip()] = tag.strip()
    return lexicon


_NOUN_SUFFIXES = ("tion", "sion", "ment", "ness", "ance", "ence", "ship", "ity")
_VERB_SUFFIXES = ("ize", "ise", "ify", "ate")
_ADJ_SUFFIXES = ("ous", "ful", "able", "ible", "ive", "less", "ish")


def _coarse_tag(word: str) -> str | None:
    tag = _pos_lexicon().get(word)
    if tag:
        return tag
    if word.endswith("ly"):
        return "adv"
    if word.endswith(_NOUN_SUFFIXES):
        return "noun"
    if word.endswith(_VERB_SUFFIXES):
        return "verb"
    if word.endswith(_ADJ_SUFFIXES):
        return "adj"
    return None


def nlp_features(text: str) -> np.ndarray:
    """Eight surface statistics; density is characters per word + 1."""
    words = re.findall(r"[A-Za-z']+", text)
    counts = Counter()
    for word in words:
        tag = _coarse_tag(word.lower())
        if tag:
            counts[tag] += 1
    word_count = len(words)
    char_count = len(text)
    return np.array(
        [
            word_count,
            char_count,
            counts["noun"],
            counts["verb"],
            counts["adj"],
            counts["adv"],
            counts["pron"],
            char_count / (word_count + 1),
        ],
        dtype=np.float64,
    )


class NlpFeaturizer(BaseEstimator, TransformerMixin):
    """Stateless dense featurizer over raw sentence text."""

    def fit(self, X: list[str], y=None) -> "NlpFeaturizer":
        return self

    def transform(self, X: list[str]) -> sparse.csr_matrix:
        rows = np.vstack([nlp_features(text) for text in X]) if X else np.zeros((0, 8))
        return sparse.csr_matrix(rows)
