"""Subgraph pattern matching over any labeled directed graph view.

The matcher works against a duck-typed view exposing node_ids / node_kind /
node_label / has_edge / out_edges / in_edges / candidates, so the same
machinery serves both the knowledge graph and manifest parse trees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

from ..errors import ValidationError


@dataclass(frozen=True)
class PatternNode:
    kind: str
    label: str | None = None  # None matches any label


@dataclass(frozen=True)
class PatternEdge:
    src: int
    predicate: str
    dst: int


class GraphView(Protocol):
    def node_ids(self) -> tuple[str, ...]: ...

    def node_kind(self, node_id: str) -> str: ...

    def node_label(self, node_id: str) -> str: ...

    def has_edge(self, subject: str, predicate: str, obj: str) -> bool: ...

    def out_edges(self, subject: str, predicate: str) -> tuple[str, ...]: ...

    def in_edges(self, obj: str, predicate: str) -> tuple[str, ...]: ...

    def candidates(self, kind: str, label: str | None) -> tuple[str, ...]: ...


class GraphPattern:
    """A connected pattern of kind/label-constrained nodes and typed edges."""

    def __init__(self, nodes: list[PatternNode], edges: list[PatternEdge] | None = None):
        edges = list(edges or [])
        if not nodes:
            raise ValidationError("pattern must contain at least one node")
        n = len(nodes)
        for edge in edges:
            if not (0 <= edge.src < n and 0 <= edge.dst < n):
                raise ValidationError(f"pattern edge {edge} references a missing node")
        if not _connected(n, edges):
            raise ValidationError("pattern must be connected")
        self.nodes = list(nodes)
        self.edges = edges

    def __len__(self) -> int:
        return len(self.nodes)


def _connected(n: int, edges: list[PatternEdge]) -> bool:
    if n == 1:
        return True
    adjacency: dict[int, set[int]] = {i: set() for i in range(n)}
    for edge in edges:
        adjacency[edge.src].add(edge.dst)
        adjacency[edge.dst].add(edge.src)
    seen = {0}
    stack = [0]
    while stack:
        for nxt in adjacency[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == n


def _visit_order(pattern: GraphPattern) -> list[int]:
    """Node order that keeps every next node adjacent to an already-bound one."""
    remaining = set(range(len(pattern.nodes)))
    order = [0]
    remaining.discard(0)
    while remaining:
        for idx in sorted(remaining):
            if any(
                (e.src == idx and e.dst in set(order)) or (e.dst == idx and e.src in set(order))
                for e in pattern.edges
            ):
                order.append(idx)
                remaining.discard(idx)
                break
        else:  # pragma: no cover - unreachable for connected patterns
            order.extend(sorted(remaining))
            remaining.clear()
    return order


def _node_ok(view: GraphView, node: PatternNode, node_id: str) -> bool:
    if view.node_kind(node_id) != node.kind:
        return False
    return node.label is None or view.node_label(node_id) == node.label


def match(view: GraphView, pattern: GraphPattern) -> list[dict[int, str]]:
    """Enumerate every injective binding of pattern nodes onto graph nodes.

    A binding maps pattern node index -> graph node id such that all
    kind/label constraints hold and every pattern edge is realized by an
    edge in the view. Results are sorted by the tuple of bound ids.
    """
    order = _visit_order(pattern)
    bindings: list[dict[int, str]] = []

    def anchored_candidates(idx: int, bound: dict[int, str]) -> tuple[str, ...]:
        for edge in pattern.edges:
            if edge.dst == idx and edge.src in bound:
                return view.out_edges(bound[edge.src], edge.predicate)
            if edge.src == idx and edge.dst in bound:
                return view.in_edges(bound[edge.dst], edge.predicate)
        return view.candidates(pattern.nodes[idx].kind, pattern.nodes[idx].label)

    def extend(position: int, bound: dict[int, str]) -> None:
        if position == len(order):
            bindings.append(dict(bound))
            return
        idx = order[position]
        node = pattern.nodes[idx]
        for candidate in anchored_candidates(idx, bound):
            if candidate in bound.values():
                continue
            if not _node_ok(view, node, candidate):
                continue
            ok = True
            for edge in pattern.edges:
                src = bound.get(edge.src) if edge.src != idx else candidate
                dst = bound.get(edge.dst) if edge.dst != idx else candidate
                if src is not None and dst is not None and not view.has_edge(src, edge.predicate, dst):
                    ok = False
                    break
            if ok:
                bound[idx] = candidate
                extend(position + 1, bound)
                del bound[idx]

    extend(0, {})
    bindings.sort(key=lambda b: tuple(b[i] for i in range(len(pattern.nodes))))
    return bindings
