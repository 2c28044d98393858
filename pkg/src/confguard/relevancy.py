"""Keyword-based relevancy estimation for security documents.

A document is configuration-relevant iff some sentence contains a token
that exactly equals a known argument surface form. Matching is
case-sensitive with no stemming or fuzzing: precision is prioritized over
recall, so mentions that break the original syntax are deliberately missed.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .corpus import RawDocument, split_sentences
from .errors import ValidationError
from .kg.graph import ConfigKnowledgeGraph, EntityKind

# Characters stripped from token edges; internal dashes, dots and
# underscores are configuration syntax and must survive.
_LEAD_STRIP = "\"'`“”‘’*(<[{,;:!?."
_TRAIL_STRIP = "\"'`“”‘’*)>]},;:!?."


@dataclass(frozen=True)
class ArgumentLexicon:
    """Exact argument surface forms, each tied to its entity id."""

    entries: dict[str, str]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self.entries


@dataclass(frozen=True)
class SentenceMatch:
    sentence_index: int
    surface: str
    entity_id: str


@dataclass(frozen=True)
class RelevancyResult:
    doc_id: str
    relevant: bool
    matches: tuple[SentenceMatch, ...]


def build_lexicon(graph: ConfigKnowledgeGraph) -> ArgumentLexicon:
    entries: dict[str, str] = {}
    for entity_id in graph.entities_of_kind(EntityKind.ARGUMENT):
        entries[graph.entity(entity_id).label] = entity_id
    if not entries:
        raise ValidationError("graph holds no Argument entities; lexicon would match nothing")
    return ArgumentLexicon(entries)


def tokenize_preserving(text: str) -> list[str]:
    """Whitespace tokens with wrapping punctuation stripped, syntax kept.

    Leading dashes, camel case, dots and underscores pass through
    untouched so lexicon matching can be exact.
    """
    tokens: list[str] = []
    for raw in text.split():
        token = raw.lstrip(_LEAD_STRIP).rstrip(_TRAIL_STRIP)
        if token:
            tokens.append(token)
    return tokens


def label_sentence(sentence_text: str, lexicon: ArgumentLexicon) -> list[str]:
    """Surface forms matched in the sentence, in first-occurrence order."""
    matched: list[str] = []
    for token in tokenize_preserving(sentence_text):
        if token in lexicon and token not in matched:
            matched.append(token)
    return matched


def classify_document(doc: RawDocument, lexicon: ArgumentLexicon) -> RelevancyResult:
    matches: list[SentenceMatch] = []
    for sentence in split_sentences(doc.body, doc.id):
        for surface in label_sentence(sentence.text, lexicon):
            matches.append(SentenceMatch(sentence.index, surface, lexicon.entries[surface]))
    return RelevancyResult(doc.id, bool(matches), tuple(matches))


def classify_corpus(
    docs: list[RawDocument], lexicon: ArgumentLexicon, jobs: int = 1
) -> list[RelevancyResult]:
    """Classify documents independently; results come back in doc-id order."""
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda d: classify_document(d, lexicon), docs))
    else:
        results = [classify_document(doc, lexicon) for doc in docs]
    return sorted(results, key=lambda r: r.doc_id)


def result_to_dict(result: RelevancyResult) -> dict:
    return {
        "doc_id": result.doc_id,
        "relevant": result.relevant,
        "matches": [
            {"sentence_index": m.sentence_index, "surface": m.surface, "entity_id": m.entity_id}
            for m in result.matches
        ],
    }


def results_to_jsonl(results: list[RelevancyResult]) -> str:
    return "".join(json.dumps(result_to_dict(r), ensure_ascii=False, sort_keys=True) + "\n" for r in results)
