"""Manifest parse trees: order-preserving YAML/JSON round-tripping.

The tree's root is the manifest's "kind" value, interior nodes are
argument names, and every scalar sits in a typed leaf. Paths use dotted
keys with bracketed list indices, e.g.
spec.template.spec.containers[0].imagePullPolicy.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import yaml

from ..errors import ParseError, UsageError, ValidationError

SCALAR_TAGS = ("text", "integer", "boolean", "float", "null")


@dataclass
class LeafNode:
    value: object
    tag: str = field(init=False)

    def __post_init__(self) -> None:
        self.tag = scalar_tag(self.value)


@dataclass
class MapNode:
    children: dict[str, "Node"] = field(default_factory=dict)


@dataclass
class ListNode:
    items: list["Node"] = field(default_factory=list)


Node = LeafNode | MapNode | ListNode


def scalar_tag(value: object) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, float):
        return "float"
    if isinstance(value, str):
        return "text"
    raise ValidationError(f"unsupported scalar {value!r}")


def canonical(value: object) -> str:
    """Stable text form of a leaf value, used for option comparison."""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _build(node: object) -> Node:
    if isinstance(node, dict):
        out = MapNode()
        for key, value in node.items():
            out.children[str(key)] = _build(value)
        return out
    if isinstance(node, list):
        return ListNode([_build(item) for item in node])
    return LeafNode(node)


def _to_python(node: Node) -> object:
    if isinstance(node, LeafNode):
        return node.value
    if isinstance(node, MapNode):
        return {key: _to_python(child) for key, child in node.children.items()}
    return [_to_python(item) for item in node.items]


@dataclass
class ComplianceParseTree:
    kind: str
    root: MapNode
    doc_index: int = 0

    def to_python(self) -> dict:
        return _to_python(self.root)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComplianceParseTree):
            return NotImplemented
        return self.kind == other.kind and _nodes_equal(self.root, other.root)


def _nodes_equal(a: Node, b: Node) -> bool:
    if isinstance(a, LeafNode) and isinstance(b, LeafNode):
        return a.tag == b.tag and a.value == b.value
    if isinstance(a, MapNode) and isinstance(b, MapNode):
        return list(a.children) == list(b.children) and all(
            _nodes_equal(a.children[k], b.children[k]) for k in a.children
        )
    if isinstance(a, ListNode) and isinstance(b, ListNode):
        return len(a.items) == len(b.items) and all(
            _nodes_equal(x, y) for x, y in zip(a.items, b.items)
        )
    return False


def _tree_from_data(data: object, doc_index: int) -> ComplianceParseTree:
    if not isinstance(data, dict):
        raise ValidationError(f"document {doc_index}: manifest must be a mapping")
    kind = data.get("kind")
    if not isinstance(kind, str) or not kind:
        raise ValidationError(f"document {doc_index}: manifest has no 'kind' key")
    root = _build(data)
    assert isinstance(root, MapNode)
    return ComplianceParseTree(kind=kind, root=root, doc_index=doc_index)


def _load_yaml_documents(text: str) -> list[object]:
    try:
        return list(yaml.safe_load_all(text))
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise ParseError(f"manifest parse error at line {mark.line + 1}, column {mark.column + 1}") from exc
        raise ParseError(f"manifest parse error: {exc}") from exc


def parse_manifest(text: str) -> ComplianceParseTree:
    """Parse a single YAML or JSON manifest document."""
    documents = [d for d in _load_yaml_documents(text) if d is not None]
    if not documents:
        raise ValidationError("manifest is empty")
    if len(documents) > 1:
        raise ValidationError("manifest is a multi-document stream; use parse_manifest_stream")
    return _tree_from_data(documents[0], 0)


def parse_manifest_stream(text: str) -> list[ComplianceParseTree]:
    """Parse a multi-document stream; empty documents are dropped.

    A single top-level JSON/YAML array is treated as a list of documents,
    matching the JSON form of the stream emitter.
    """
    documents = [d for d in _load_yaml_documents(text) if d is not None]
    if len(documents) == 1 and isinstance(documents[0], list):
        documents = documents[0]
    if not documents:
        raise ValidationError("manifest stream contains no documents")
    return [_tree_from_data(d, i) for i, d in enumerate(documents)]


def emit(tree: ComplianceParseTree, fmt: str = "yaml") -> str:
    """Serialize with 2-space indentation and original key order."""
    data = tree.to_python()
    if fmt == "yaml":
        return yaml.safe_dump(
            data, sort_keys=False, indent=2, default_flow_style=False, allow_unicode=True
        )
    if fmt == "json":
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    raise UsageError(f"unsupported manifest format {fmt!r}")


def emit_stream(trees: list[ComplianceParseTree], fmt: str = "yaml") -> str:
    if fmt == "yaml":
        return "---\n".join(emit(t, "yaml") for t in trees)
    if fmt == "json":
        return json.dumps([t.to_python() for t in trees], indent=2, ensure_ascii=False) + "\n"
    raise UsageError(f"unsupported manifest format {fmt!r}")


# -- paths ------------------------------------------------------------------

WILDCARD = "*"
_SEGMENT = re.compile(r"([^.\[\]]+)|\[(\d+|\*)\]")

Segment = str | int  # map key, list index, or WILDCARD


def parse_path(path: str) -> list[Segment]:
    """Split "a.b[0].c" / "a.b[*]" into key, index and wildcard segments."""
    segments: list[Segment] = []
    position = 0
    while position < len(path):
        if path[position] == ".":
            position += 1
            continue
        match = _SEGMENT.match(path, position)
        if match is None:
            raise ValidationError(f"bad path syntax {path!r} at offset {position}")
        if match.group(1) is not None:
            segments.append(match.group(1))
        elif match.group(2) == WILDCARD:
            segments.append(WILDCARD)
        else:
            segments.append(int(match.group(2)))
        position = match.end()
    if not segments:
        raise ValidationError("empty path")
    return segments


def join_path(prefix: str, segment: Segment) -> str:
    if isinstance(segment, int):
        return f"{prefix}[{segment}]"
    if segment == WILDCARD:
        return f"{prefix}[*]"
    return f"{prefix}.{segment}" if prefix else segment


def node_at(tree: ComplianceParseTree, path: str) -> Node | None:
    """Resolve a concrete (wildcard-free) path; None when absent."""
    node: Node = tree.root
    for segment in parse_path(path):
        if segment == WILDCARD:
            raise ValidationError(f"path {path!r} contains a wildcard")
        if isinstance(segment, int):
            if not isinstance(node, ListNode) or segment >= len(node.items):
                return None
            node = node.items[segment]
        else:
            if not isinstance(node, MapNode) or segment not in node.children:
                return None
            node = node.children[segment]
    return node
