"""Automated remediation: replace insecure leaves, insert missing arguments."""

from __future__ import annotations

import copy
from dataclasses import dataclass

from ..errors import RemediationError
from .checker import Finding
from .policy import PolicyRule
from .tree import (
    WILDCARD,
    ComplianceParseTree,
    LeafNode,
    ListNode,
    MapNode,
    Node,
    join_path,
    parse_path,
)


@dataclass(frozen=True)
class ReplaceLeaf:
    path: str
    value: object

    def to_dict(self) -> dict:
        return {"op": "replace-leaf", "path": self.path, "value": self.value}


@dataclass(frozen=True)
class InsertSubtree:
    parent_path: str
    argument: str
    value: object

    def to_dict(self) -> dict:
        return {"op": "insert-subtree", "parent_path": self.parent_path, "argument": self.argument, "value": self.value}


Edit = ReplaceLeaf | InsertSubtree


@dataclass(frozen=True)
class RemediationPlan:
    edits: tuple[Edit, ...]

    def to_dict(self) -> dict:
        return {"edits": [e.to_dict() for e in self.edits]}


def _nest(segments: list, value: object) -> object:
    for segment in reversed(segments):
        value = {segment: value}
    return value


def _merge(existing: object, incoming: object, at: str) -> object:
    if isinstance(existing, dict) and isinstance(incoming, dict):
        merged = dict(existing)
        for key, value in incoming.items():
            if key in merged:
                merged[key] = _merge(merged[key], value, f"{at}.{key}")
            else:
                merged[key] = value
        return merged
    if existing == incoming:
        return existing
    raise RemediationError(f"conflicting edits at {at}: {existing!r} vs {incoming!r}")


def _descend(root: MapNode, segments: list) -> tuple[Node, int]:
    """Deepest existing node along the segments and how many were consumed."""
    node: Node = root
    for consumed, segment in enumerate(segments):
        if isinstance(segment, int) and isinstance(node, ListNode) and segment < len(node.items):
            node = node.items[segment]
        elif isinstance(segment, str) and segment != WILDCARD and isinstance(node, MapNode) and segment in node.children:
            node = node.children[segment]
        else:
            return node, consumed
    return node, len(segments)


def _build_node(value: object) -> Node:
    if isinstance(value, dict):
        out = MapNode()
        for key, child in value.items():
            out.children[str(key)] = _build_node(child)
        return out
    if isinstance(value, list):
        return ListNode([_build_node(item) for item in value])
    return LeafNode(value)


def remediate(
    tree: ComplianceParseTree, findings: list[Finding], policy: list[PolicyRule]
) -> tuple[ComplianceParseTree, RemediationPlan]:
    """Produce a patched copy of the tree plus the ordered edit plan.

    Insecure options become leaf replacements with the rule's remediation
    value; missing arguments become a single merged insertion at the
    deepest existing ancestor, creating intermediate maps as needed.
    """
    patched = copy.deepcopy(tree)
    replacements: dict[str, object] = {}
    inserts: dict[tuple[str, str], object] = {}

    for finding in sorted(findings, key=lambda f: (f.path, f.kind, f.rule_path)):
        if finding.kind == "InsecureOption":
            if finding.path in replacements and replacements[finding.path] != finding.fix:
                raise RemediationError(f"conflicting replacement values at {finding.path}")
            replacements[finding.path] = finding.fix
        elif finding.kind == "MissingArgument":
            segments = parse_path(finding.path)
            if WILDCARD in segments:
                raise RemediationError(f"cannot materialize wildcard path {finding.path!r}")
            anchor, consumed = _descend(patched.root, segments)
            if not isinstance(anchor, MapNode) or consumed >= len(segments):
                raise RemediationError(f"no insertion point for {finding.path!r}")
            parent_path = ""
            for segment in segments[:consumed]:
                parent_path = join_path(parent_path, segment)
            key = str(segments[consumed])
            value = _nest([str(s) for s in segments[consumed + 1 :]], finding.fix)
            slot = (parent_path, key)
            if slot in inserts:
                inserts[slot] = _merge(inserts[slot], value, parent_path + "." + key if parent_path else key)
            else:
                inserts[slot] = value
        else:
            raise RemediationError(f"unknown finding kind {finding.kind!r}")

    for path in replacements:
        for parent_path, key in inserts:
            inserted_root = join_path(parent_path, key)
            if path == inserted_root or path.startswith((inserted_root + ".", inserted_root + "[")):
                raise RemediationError(f"replacement under inserted path {path!r}")

    edits: list[Edit] = []
    for (parent_path, key), value in sorted(inserts.items()):
        edits.append(InsertSubtree(parent_path, key, value))
    for path, value in sorted(replacements.items()):
        edits.append(ReplaceLeaf(path, value))

    for edit in edits:
        _apply(patched, edit)
    return patched, RemediationPlan(tuple(edits))


def _apply(tree: ComplianceParseTree, edit: Edit) -> None:
    if isinstance(edit, ReplaceLeaf):
        segments = parse_path(edit.path)
        node, consumed = _descend(tree.root, segments)
        if consumed != len(segments) or not isinstance(node, LeafNode):
            raise RemediationError(f"replacement target {edit.path!r} is not a leaf")
        node.value = edit.value
        node.tag = LeafNode(edit.value).tag
        return
    segments = parse_path(edit.parent_path) if edit.parent_path else []
    node, consumed = _descend(tree.root, segments)
    if consumed != len(segments) or not isinstance(node, MapNode):
        raise RemediationError(f"insertion parent {edit.parent_path!r} is not a map")
    if edit.argument in node.children:
        raise RemediationError(f"insertion target {edit.parent_path}.{edit.argument} already exists")
    node.children[edit.argument] = _build_node(edit.value)
