"""Misconfiguration detection by matching rule patterns against the tree.

Each manifest is viewed as a labeled graph (interior argument nodes, leaf
option nodes) and every policy rule is compiled to a path-shaped
GraphPattern, so detection runs on the same subgraph-matching machinery
as knowledge-graph queries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..kg.pattern import GraphPattern, PatternEdge, PatternNode, match
from .policy import PolicyRule
from .tree import (
    WILDCARD,
    ComplianceParseTree,
    LeafNode,
    ListNode,
    MapNode,
    Node,
    Segment,
    canonical,
    join_path,
    parse_path,
)

ROOT_KIND = "File"
ARGUMENT_KIND = "Argument"
OPTION_KIND = "Option"
KEY_EDGE = "hasArgument"
ITEM_EDGE = "hasItem"
VALUE_EDGE = "hasOption"

_ROOT_ID = "$"
_VALUE_SUFFIX = "#value"


class TreeGraphView:
    """Graph adapter over a ComplianceParseTree for the pattern matcher.

    Node ids are paths; interior nodes carry their key as label while leaf
    nodes carry the canonical scalar text.
    """

    def __init__(self, tree: ComplianceParseTree):
        self.tree = tree
        self._kinds: dict[str, str] = {}
        self._labels: dict[str, str] = {}
        self._out: dict[tuple[str, str], list[str]] = {}
        self._in: dict[tuple[str, str], list[str]] = {}
        self._values: dict[str, object] = {}
        self._nodes: dict[str, Node] = {}
        self._add_node(_ROOT_ID, ROOT_KIND, tree.kind, tree.root)
        self._walk(tree.root, _ROOT_ID, "")

    def _add_node(self, node_id: str, kind: str, label: str, node: Node) -> None:
        self._kinds[node_id] = kind
        self._labels[node_id] = label
        self._nodes[node_id] = node

    def _add_edge(self, src: str, predicate: str, dst: str) -> None:
        self._out.setdefault((src, predicate), []).append(dst)
        self._in.setdefault((dst, predicate), []).append(src)

    def _walk(self, node: Node, node_id: str, path: str) -> None:
        if isinstance(node, MapNode):
            for key, child in node.children.items():
                child_path = join_path(path, key)
                child_id = child_path
                if isinstance(child, LeafNode):
                    # The key is the argument; its scalar is a separate option node.
                    self._add_node(child_id, ARGUMENT_KIND, key, child)
                    self._add_edge(node_id, KEY_EDGE, child_id)
                    value_id = child_id + _VALUE_SUFFIX
                    self._add_node(value_id, OPTION_KIND, canonical(child.value), child)
                    self._values[value_id] = child.value
                    self._add_edge(child_id, VALUE_EDGE, value_id)
                else:
                    self._add_node(child_id, ARGUMENT_KIND, key, child)
                    self._add_edge(node_id, KEY_EDGE, child_id)
                    self._walk(child, child_id, child_path)
        elif isinstance(node, ListNode):
            for index, item in enumerate(node.items):
                item_path = join_path(path, index)
                if isinstance(item, LeafNode):
                    self._add_node(item_path, OPTION_KIND, canonical(item.value), item)
                    self._values[item_path] = item.value
                    self._add_edge(node_id, ITEM_EDGE, item_path)
                else:
                    self._add_node(item_path, ARGUMENT_KIND, str(index), item)
                    self._add_edge(node_id, ITEM_EDGE, item_path)
                    self._walk(item, item_path, item_path)

    # matcher protocol

    def node_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._kinds))

    def node_kind(self, node_id: str) -> str:
        return self._kinds[node_id]

    def node_label(self, node_id: str) -> str:
        return self._labels[node_id]

    def has_edge(self, subject: str, predicate: str, obj: str) -> bool:
        return obj in self._out.get((subject, predicate), ())

    def out_edges(self, subject: str, predicate: str) -> tuple[str, ...]:
        return tuple(sorted(self._out.get((subject, predicate), ())))

    def in_edges(self, obj: str, predicate: str) -> tuple[str, ...]:
        return tuple(sorted(self._in.get((obj, predicate), ())))

    def candidates(self, kind: str, label: str | None) -> tuple[str, ...]:
        return tuple(
            sorted(
                node_id
                for node_id, node_kind in self._kinds.items()
                if node_kind == kind and (label is None or self._labels[node_id] == label)
            )
        )

    # conveniences used by the checker

    def tree_node(self, node_id: str) -> Node:
        return self._nodes[node_id]

    def leaf_value(self, node_id: str) -> object:
        return self._values[node_id]

    def path_of(self, node_id: str) -> str:
        return "" if node_id == _ROOT_ID else node_id.removesuffix(_VALUE_SUFFIX)


def rule_pattern(segments: list[Segment], with_value: bool = False) -> GraphPattern:
    """Compile a rule path prefix into a chain-shaped pattern."""
    nodes: list[PatternNode] = [PatternNode(ROOT_KIND, None)]
    edges: list[PatternEdge] = []
    previous = 0
    for segment in segments:
        if segment == WILDCARD:
            nodes.append(PatternNode(ARGUMENT_KIND, None))
            edges.append(PatternEdge(previous, ITEM_EDGE, len(nodes) - 1))
        elif isinstance(segment, int):
            nodes.append(PatternNode(ARGUMENT_KIND, str(segment)))
            edges.append(PatternEdge(previous, ITEM_EDGE, len(nodes) - 1))
        else:
            nodes.append(PatternNode(ARGUMENT_KIND, segment))
            edges.append(PatternEdge(previous, KEY_EDGE, len(nodes) - 1))
        previous = len(nodes) - 1
    if with_value:
        nodes.append(PatternNode(OPTION_KIND, None))
        edges.append(PatternEdge(previous, VALUE_EDGE, len(nodes) - 1))
    return GraphPattern(nodes, edges)


@dataclass(frozen=True)
class Finding:
    path: str
    kind: str  # MissingArgument | InsecureOption
    observed: str | None
    expected: tuple[str, ...]
    rationale: str
    fix: object
    rule_path: str
    rule_kind: str
    doc_index: int = 0

    def to_dict(self) -> dict:
        return {
            "path": self.path,
            "kind": self.kind,
            "observed": self.observed,
            "expected": list(self.expected),
            "rationale": self.rationale,
            "fix": self.fix,
            "rule_path": self.rule_path,
            "rule_kind": self.rule_kind,
            "doc_index": self.doc_index,
        }

    def to_line(self) -> str:
        observed = "(absent)" if self.observed is None else self.observed
        expected = "{" + ", ".join(self.expected) + "}" if self.expected else "(present)"
        rationale = self.rationale or "no recorded rationale"
        return f"{self.path} {self.kind} {observed}→{expected} — {rationale}"


def _tail_path(prefix: str, segments: list[Segment]) -> str:
    path = prefix
    for segment in segments:
        path = join_path(path, segment)
    return path


def check(tree: ComplianceParseTree, policy: list[PolicyRule]) -> list[Finding]:
    """Evaluate every applicable rule; findings come back ordered by path."""
    view = TreeGraphView(tree)
    findings: list[Finding] = []
    for rule in policy:
        if rule.applies_to != tree.kind:
            continue
        segments = parse_path(rule.path)
        if rule.rule_kind == "required-argument":
            findings.extend(_check_required(view, rule, segments, tree.doc_index))
        else:
            findings.extend(_check_values(view, rule, segments, tree.doc_index))
    findings.sort(key=lambda f: (f.doc_index, f.path, f.kind, f.rule_path))
    return findings


def _check_required(
    view: TreeGraphView, rule: PolicyRule, segments: list[Segment], doc_index: int
) -> list[Finding]:
    findings = []
    for depth in range(len(segments)):
        prefix_pattern = rule_pattern(segments[:depth])
        next_segment = segments[depth]
        for binding in match(view, prefix_pattern):
            node_id = binding[len(prefix_pattern) - 1]
            node = view.tree_node(node_id)
            if next_segment == WILDCARD or isinstance(next_segment, int):
                continue  # absent list items are not a misconfiguration
            if isinstance(node, MapNode) and next_segment in node.children:
                continue
            if not isinstance(node, MapNode):
                continue
            findings.append(
                Finding(
                    path=_tail_path(view.path_of(node_id), segments[depth:]),
                    kind="MissingArgument",
                    observed=None,
                    expected=rule.expected,
                    rationale=rule.rationale,
                    fix=rule.remediation,
                    rule_path=rule.path,
                    rule_kind=rule.rule_kind,
                    doc_index=doc_index,
                )
            )
    return findings


def _check_values(
    view: TreeGraphView, rule: PolicyRule, segments: list[Segment], doc_index: int
) -> list[Finding]:
    findings = []
    expected = set(rule.expected)
    for binding in match(view, rule_pattern(segments, with_value=True)):
        value_id = binding[len(segments) + 1]
        observed = canonical(view.leaf_value(value_id))
        if rule.rule_kind == "secured-option-set":
            bad = observed not in expected
        else:  # forbidden-option
            bad = observed in expected
        if bad:
            findings.append(
                Finding(
                    path=view.path_of(value_id),
                    kind="InsecureOption",
                    observed=observed,
                    expected=rule.expected,
                    rationale=rule.rationale,
                    fix=rule.remediation,
                    rule_path=rule.path,
                    rule_kind=rule.rule_kind,
                    doc_index=doc_index,
                )
            )
    return findings


def findings_to_json(findings: list[Finding]) -> str:
    return json.dumps([f.to_dict() for f in findings], indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def findings_to_text(findings: list[Finding]) -> str:
    return "".join(f.to_line() + "\n" for f in findings)
