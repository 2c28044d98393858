"""Graph persistence: JSON triples files and Cypher export."""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import ParseError, ValidationError
from .graph import ConfigKnowledgeGraph, Entity, EntityKind, Predicate


def serialize(graph: ConfigKnowledgeGraph) -> str:
    """Render the graph as its canonical JSON triples document.

    Entities are sorted by id and relations lexicographically by (s, p, o),
    so the output is byte-stable for equal graphs.
    """
    payload = {
        "entities": [
            {"id": e.id, "kind": e.kind.value, "label": e.label, "attrs": e.attrs}
            for e in graph.entities()
        ],
        "relations": [{"s": s, "p": p, "o": o} for s, p, o in graph.triples()],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def deserialize(text: str) -> ConfigKnowledgeGraph:
    """Parse a JSON triples document; failure never returns a partial graph."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid graph JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(payload, dict) or "entities" not in payload or "relations" not in payload:
        raise ParseError("graph JSON must be an object with 'entities' and 'relations'")

    entities: list[Entity] = []
    for i, raw in enumerate(payload["entities"]):
        try:
            attrs = raw.get("attrs") or {}
            entities.append(
                Entity(
                    id=str(raw["id"]),
                    kind=EntityKind(raw["kind"]),
                    label=str(raw["label"]),
                    attrs={str(k): str(v) for k, v in attrs.items()},
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"invalid entity at index {i}: {exc}") from exc
    triples = []
    for i, raw in enumerate(payload["relations"]):
        try:
            triples.append((str(raw["s"]), Predicate(raw["p"]).value, str(raw["o"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"invalid relation at index {i}: {exc}") from exc

    graph = ConfigKnowledgeGraph()
    graph._restore(entities, triples)
    return graph


def save_graph(graph: ConfigKnowledgeGraph, path: str | Path) -> None:
    Path(path).write_text(serialize(graph), encoding="utf-8")


def load_graph(path: str | Path) -> ConfigKnowledgeGraph:
    return deserialize(Path(path).read_text(encoding="utf-8"))


def _cypher_quote(value: str) -> str:
    return "'" + value.replace("\\", "\\\\").replace("'", "\\'") + "'"


def export_cypher(graph: ConfigKnowledgeGraph) -> str:
    """Emit one CREATE statement per entity and per relation, one per line."""
    lines: list[str] = []
    for entity in graph.entities():
        props = [f"id: {_cypher_quote(entity.id)}", f"label: {_cypher_quote(entity.label)}"]
        for key in sorted(entity.attrs):
            props.append(f"`{key}`: {_cypher_quote(entity.attrs[key])}")
        lines.append(f"CREATE (:{entity.kind.value} {{{', '.join(props)}}});")
    for s, p, o in graph.triples():
        lines.append(
            "MATCH (a {id: %s}), (b {id: %s}) CREATE (a)-[:%s]->(b);"
            % (_cypher_quote(s), _cypher_quote(o), p)
        )
    return "\n".join(lines) + ("\n" if lines else "")


def summary_line(graph: ConfigKnowledgeGraph) -> str:
    return f"entities={graph.num_entities} relations={graph.num_triples}"


__all__ = [
    "serialize",
    "deserialize",
    "save_graph",
    "load_graph",
    "export_cypher",
    "summary_line",
    "ValidationError",
]
