"""Security enrichment: attach classified concepts to argument nodes,
extract secured options by rule, and compute hot-spot statistics."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

from .corpus import RawDocument, split_sentences
from .kg.graph import ConfigKnowledgeGraph, EntityKind, Predicate
from .relevancy import ArgumentLexicon, label_sentence, tokenize_preserving

log = logging.getLogger(__name__)

CONCEPT_KIND = {
    "statement": EntityKind.STATEMENT,
    "goal": EntityKind.GOAL,
    "action": EntityKind.ACTION,
}
CONCEPT_PREDICATE = {
    "statement": Predicate.HAS_STATEMENT,
    "goal": Predicate.HAS_GOAL,
    "action": Predicate.HAS_ACTION,
}

DEFAULT_CONFIDENCE_THRESHOLD = 0.5


@dataclass(frozen=True)
class ConceptPrediction:
    doc_id: str
    sentence_index: int
    text: str
    label: str  # statement | goal | action ("other" is filtered upstream)
    matched: tuple[tuple[str, str], ...]  # (surface form, argument entity id)
    confidence: float


def predict_concepts(
    graph: ConfigKnowledgeGraph,
    docs: list[RawDocument],
    model,
    lexicon: ArgumentLexicon,
) -> list[ConceptPrediction]:
    """Classify sentences of relevant documents into concept predictions.

    A sentence is tied to the arguments it mentions verbatim. Sentences
    with no direct mention (typically goal prose about an option value)
    fall back to the document's matched arguments whose documented options
    appear as tokens of the sentence.
    """
    predictions: list[ConceptPrediction] = []
    for doc in sorted(docs, key=lambda d: d.id):
        sentences = split_sentences(doc.body, doc.id)
        per_sentence = [label_sentence(s.text, lexicon) for s in sentences]
        doc_surfaces = sorted({surface for matched in per_sentence for surface in matched})
        if not doc_surfaces:
            continue
        labeled = model.predict([s.text for s in sentences])
        for sentence, matched_surfaces, (label, scores) in zip(sentences, per_sentence, labeled):
            if label == "other":
                continue
            if not matched_surfaces:
                matched_surfaces = _fallback_by_option(graph, lexicon, sentence.text, doc_surfaces)
            matched = tuple((s, lexicon.entries[s]) for s in matched_surfaces)
            predictions.append(
                ConceptPrediction(
                    doc_id=doc.id,
                    sentence_index=sentence.index,
                    text=sentence.text,
                    label=label,
                    matched=matched,
                    confidence=scores[label],
                )
            )
    return predictions


def _fallback_by_option(
    graph: ConfigKnowledgeGraph,
    lexicon: ArgumentLexicon,
    sentence_text: str,
    doc_surfaces: list[str],
) -> list[str]:
    tokens = set(tokenize_preserving(sentence_text))
    matched: list[str] = []
    for surface in doc_surfaces:
        argument_id = lexicon.entries[surface]
        option_labels = {
            graph.entity(o).label for o in graph.out(argument_id, Predicate.HAS_OPTION)
        }
        if option_labels & tokens:
            matched.append(surface)
    return matched


def attach_concepts(
    graph: ConfigKnowledgeGraph,
    predictions: list[ConceptPrediction],
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> int:
    """Add one concept entity per prediction plus a 'has' edge per matched
    argument. Repeating the call with the same inputs changes nothing."""
    attached = 0
    for prediction in sorted(predictions, key=lambda p: (p.doc_id, p.sentence_index, p.label)):
        if prediction.label not in CONCEPT_KIND:
            log.warning("skipping prediction with unknown label %r", prediction.label)
            continue
        if prediction.confidence < threshold:
            continue
        if not prediction.matched:
            log.warning(
                "doc %s sentence %d: no argument matched; concept not attached",
                prediction.doc_id,
                prediction.sentence_index,
            )
            continue
        targets = []
        for surface, argument_id in prediction.matched:
            if not graph.has_entity(argument_id):
                found = graph.find_entity(surface, EntityKind.ARGUMENT)
                if found is None:
                    log.warning("argument %r not in graph; prediction skipped for it", surface)
                    continue
                argument_id = found
            targets.append(argument_id)
        if not targets:
            continue
        concept_id = graph.add_entity(
            CONCEPT_KIND[prediction.label],
            prediction.text,
            attrs={
                "doc_id": prediction.doc_id,
                "sentence_index": str(prediction.sentence_index),
                "confidence": f"{prediction.confidence:.6f}",
            },
        )
        for argument_id in targets:
            graph.add_relation(argument_id, CONCEPT_PREDICATE[prediction.label], concept_id)
        attached += 1
    return attached


def extract_secured_options(
    graph: ConfigKnowledgeGraph,
    predictions: list[ConceptPrediction],
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> list[tuple[str, str]]:
    """Rule-based secured-option extraction.

    For statement/action predictions, any sentence token equal to a
    documented option of a matched argument marks that option as secured;
    the pair gains a hasSecuredOption edge. Negated phrasing is out of
    rule scope and contributes nothing.
    """
    pairs: set[tuple[str, str]] = set()
    for prediction in predictions:
        if prediction.label not in ("statement", "action") or prediction.confidence < threshold:
            continue
        tokens = set(tokenize_preserving(prediction.text))
        for _surface, argument_id in prediction.matched:
            if not graph.has_entity(argument_id):
                continue
            for option_id in graph.out(argument_id, Predicate.HAS_OPTION):
                if graph.entity(option_id).label in tokens:
                    pairs.add((argument_id, option_id))
    for argument_id, option_id in sorted(pairs):
        graph.add_relation(argument_id, Predicate.HAS_SECURED_OPTION, option_id)
    return sorted(pairs)


@dataclass(frozen=True)
class SystemHotspots:
    total_arguments: int
    hotspots: int
    secured_by_default: int


@dataclass(frozen=True)
class HotspotStats:
    per_system: dict[str, SystemHotspots]

    def to_dict(self) -> dict:
        return {
            system: {
                "total_arguments": s.total_arguments,
                "hotspots": s.hotspots,
                "secured_by_default": s.secured_by_default,
            }
            for system, s in sorted(self.per_system.items())
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_table(self) -> str:
        headers = ("system", "arguments", "hotspots", "secured-by-default")
        rows = [
            (system, str(s.total_arguments), str(s.hotspots), str(s.secured_by_default))
            for system, s in sorted(self.per_system.items())
        ]
        widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
        lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
        for row in rows:
            lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
        return "\n".join(lines) + "\n"


def hotspot_stats(graph: ConfigKnowledgeGraph) -> HotspotStats:
    """Classify each argument by whether its default is a secured option.

    Arguments lacking either a default or secured-option knowledge are
    counted in the total only.
    """
    per_system: dict[str, SystemHotspots] = {}
    for system_id in graph.entities_of_kind(EntityKind.SYSTEM):
        arguments: set[str] = set()
        for component_id in graph.out(system_id, Predicate.HAS_COMPONENT):
            arguments.update(graph.out(component_id, Predicate.HAS_ARGUMENT))
        hot = 0
        secured = 0
        for argument_id in sorted(arguments):
            defaults = {
                graph.entity(d).label for d in graph.out(argument_id, Predicate.HAS_DEFAULT)
            }
            secured_labels = {
                graph.entity(o).label
                for o in graph.out(argument_id, Predicate.HAS_SECURED_OPTION)
            }
            if not defaults or not secured_labels:
                continue
            if defaults <= secured_labels:
                secured += 1
            else:
                hot += 1
        per_system[graph.entity(system_id).label] = SystemHotspots(len(arguments), hot, secured)
    return HotspotStats(per_system)
