"""Sentence preprocessing for the concept classifier.

Configuration syntax must survive feature extraction, so tokens that look
like arguments or options (leading dashes, camel case, dotted or
underscored names, all-caps values) bypass lowercasing, stop-word removal
and stemming entirely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from ..relevancy import tokenize_preserving

# Matches leading-dash flags, camelCase, dotted/underscored names and
# all-caps option values such as RBAC.
DEFAULT_PROTECTED_PATTERN = (
    r"^-|[a-z][A-Z]|\w[._]\w|^[^a-z]*[A-Z][^a-z]*[A-Z][^a-z]*$"
)


@lru_cache(maxsize=1)
def load_stopwords() -> frozenset[str]:
    text = resources.files("confguard.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip() and not w.startswith("#"))


def stem(word: str) -> str:
    """Deterministic suffix stripper (rule order matters, one pass each)."""
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith("ies") and len(word) > 4:
        word = word[:-3] + "i"
    elif word.endswith("ss"):
        pass
    elif word.endswith("s") and len(word) > 3:
        word = word[:-1]
    if word.endswith("ing") and len(word) > 5:
        word = word[:-3]
    elif word.endswith("ed") and len(word) > 4:
        word = word[:-2]
    if word.endswith("ly") and len(word) > 4:
        word = word[:-2]
    if word.endswith("e") and len(word) > 4:
        word = word[:-1]
    return word


@dataclass
class PreprocessConfig:
    lowercase: bool = True
    stop_words: frozenset[str] = field(default_factory=load_stopwords)
    stemming: str = "suffix"  # "suffix" or "none"
    protected_pattern: str = DEFAULT_PROTECTED_PATTERN

    def __post_init__(self) -> None:
        self._protected = re.compile(self.protected_pattern)

    def is_protected(self, token: str) -> bool:
        return bool(self._protected.search(token))

    def to_dict(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "stop_words": sorted(self.stop_words),
            "stemming": self.stemming,
            "protected_pattern": self.protected_pattern,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "PreprocessConfig":
        return cls(
            lowercase=bool(raw["lowercase"]),
            stop_words=frozenset(raw["stop_words"]),
            stemming=str(raw["stemming"]),
            protected_pattern=str(raw["protected_pattern"]),
        )


def preprocess(text: str, cfg: PreprocessConfig | None = None) -> list[str]:
    """Tokenize and normalize a sentence, leaving protected tokens intact."""
    cfg = cfg or PreprocessConfig()
    out: list[str] = []
    for token in tokenize_preserving(text):
        if cfg.is_protected(token):
            out.append(token)
            continue
        word = token.lower() if cfg.lowercase else token
        if word in cfg.stop_words:
            continue
        if cfg.stemming == "suffix":
            word = stem(word)
        if word:
            out.append(word)
    return out
