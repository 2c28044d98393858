"""Independent reference implementations used to cross-check the library.

Everything here is deliberately written by a different route than the code
under test: exhaustive enumeration, direct tree walks, and textbook
formulas.
"""

from __future__ import annotations

import math
import random
from itertools import permutations

from confguard.compliance.checker import Finding
from confguard.compliance.tree import WILDCARD, ListNode, MapNode, parse_path
from confguard.kg.graph import ConfigKnowledgeGraph, EntityKind, Predicate
from confguard.kg.pattern import GraphPattern, PatternEdge, PatternNode


def brute_force_match(view, pattern: GraphPattern) -> list[dict[int, str]]:
    """Try every injective assignment of graph nodes to pattern nodes."""
    ids = list(view.node_ids())
    n = len(pattern.nodes)
    out = []
    for assign in permutations(ids, n):
        ok = True
        for node, candidate in zip(pattern.nodes, assign):
            if view.node_kind(candidate) != node.kind:
                ok = False
                break
            if node.label is not None and view.node_label(candidate) != node.label:
                ok = False
                break
        if not ok:
            continue
        if all(view.has_edge(assign[e.src], e.predicate, assign[e.dst]) for e in pattern.edges):
            out.append({i: a for i, a in enumerate(assign)})
    out.sort(key=lambda b: tuple(b[i] for i in range(n)))
    return out


_LABEL_POOL = ["alpha", "beta", "gamma", "true", "false", "--flag", "RBAC"]


def random_schema_graph(rng: random.Random, max_entities: int = 10) -> ConfigKnowledgeGraph:
    """A small random graph that respects the entity/relation schema."""
    graph = ConfigKnowledgeGraph()
    systems = [graph.add_entity(EntityKind.SYSTEM, f"sys{i}") for i in range(rng.randint(1, 2))]
    components: list[str] = []
    arguments: list[str] = []
    target = rng.randint(len(systems) + 1, max_entities)
    while graph.num_entities < target:
        kind = rng.choice(["component", "argument", "option", "default", "goal"])
        label = rng.choice(_LABEL_POOL)
        if kind == "component":
            comp = graph.add_entity(EntityKind.COMPONENT, label + str(rng.randint(0, 2)))
            graph.add_relation(rng.choice(systems), Predicate.HAS_COMPONENT, comp)
            components.append(comp)
        elif kind == "argument" and components:
            arg = graph.add_entity(EntityKind.ARGUMENT, label)
            graph.add_relation(rng.choice(components), Predicate.HAS_ARGUMENT, arg)
            arguments.append(arg)
        elif kind == "option" and arguments:
            parent = rng.choice(arguments)
            opt = graph.add_entity(EntityKind.OPTION, label, parent=parent)
            graph.add_relation(parent, Predicate.HAS_OPTION, opt)
            if rng.random() < 0.4:
                graph.add_relation(parent, Predicate.HAS_SECURED_OPTION, opt)
        elif kind == "default" and arguments:
            parent = rng.choice(arguments)
            default = graph.add_entity(EntityKind.DEFAULT_VALUE, label, parent=parent)
            graph.add_relation(parent, Predicate.HAS_DEFAULT, default)
        elif kind == "goal" and arguments:
            goal = graph.add_entity(EntityKind.GOAL, label + " sentence")
            graph.add_relation(rng.choice(arguments), Predicate.HAS_GOAL, goal)
    graph.validate()
    return graph


_PATTERN_CHOICES = [
    (EntityKind.SYSTEM, Predicate.HAS_COMPONENT, EntityKind.COMPONENT),
    (EntityKind.COMPONENT, Predicate.HAS_ARGUMENT, EntityKind.ARGUMENT),
    (EntityKind.ARGUMENT, Predicate.HAS_OPTION, EntityKind.OPTION),
    (EntityKind.ARGUMENT, Predicate.HAS_SECURED_OPTION, EntityKind.OPTION),
    (EntityKind.ARGUMENT, Predicate.HAS_DEFAULT, EntityKind.DEFAULT_VALUE),
    (EntityKind.ARGUMENT, Predicate.HAS_GOAL, EntityKind.GOAL),
]


def random_pattern(rng: random.Random, graph: ConfigKnowledgeGraph) -> GraphPattern:
    """A connected random pattern with at most 3 nodes."""

    def label_for(kind: EntityKind) -> str | None:
        if rng.random() < 0.5:
            return None
        ids = graph.entities_of_kind(kind)
        if ids and rng.random() < 0.8:
            return graph.entity(rng.choice(ids)).label
        return rng.choice(_LABEL_POOL)

    size = rng.randint(1, 3)
    if size == 1:
        kind = rng.choice(list(EntityKind))
        return GraphPattern([PatternNode(kind.value, label_for(kind))])
    s_kind, pred, o_kind = rng.choice(_PATTERN_CHOICES)
    nodes = [PatternNode(s_kind.value, label_for(s_kind)), PatternNode(o_kind.value, label_for(o_kind))]
    edges = [PatternEdge(0, pred.value, 1)]
    if size == 3:
        if s_kind is EntityKind.ARGUMENT and rng.random() < 0.5:
            # fan out of the same argument
            k2_choices = [c for c in _PATTERN_CHOICES if c[0] is EntityKind.ARGUMENT]
            _, pred2, o2 = rng.choice(k2_choices)
            nodes.append(PatternNode(o2.value, label_for(o2)))
            edges.append(PatternEdge(0, pred2.value, 2))
        else:
            # extend the chain upward or downward
            upstream = [c for c in _PATTERN_CHOICES if c[2] is s_kind]
            downstream = [c for c in _PATTERN_CHOICES if c[0] is o_kind]
            if downstream and (not upstream or rng.random() < 0.5):
                _, pred2, o2 = downstream[rng.randrange(len(downstream))]
                nodes.append(PatternNode(o2.value, label_for(o2)))
                edges.append(PatternEdge(1, pred2.value, 2))
            elif upstream:
                s2, pred2, _ = upstream[rng.randrange(len(upstream))]
                nodes.append(PatternNode(s2.value, label_for(s2)))
                edges.append(PatternEdge(2, pred2.value, 0))
            else:
                nodes.pop()  # keep it at two nodes
    return GraphPattern(nodes, edges)


def oracle_check(tree, policy) -> list[Finding]:
    """Rule-by-rule path enumeration over the tree, no pattern machinery."""
    findings: list[Finding] = []
    for rule in policy:
        if rule.applies_to != tree.kind:
            continue
        segments = parse_path(rule.path)

        def walk(node, depth, path):
            if depth == len(segments):
                yield "present", node, path
                return
            seg = segments[depth]
            if seg == WILDCARD:
                if isinstance(node, ListNode):
                    for j, item in enumerate(node.items):
                        yield from walk(item, depth + 1, f"{path}[{j}]")
                return
            if isinstance(seg, int):
                if isinstance(node, ListNode) and seg < len(node.items):
                    yield from walk(node.items[seg], depth + 1, f"{path}[{seg}]")
                return
            if not isinstance(node, MapNode):
                return
            if seg in node.children:
                child_path = f"{path}.{seg}" if path else seg
                yield from walk(node.children[seg], depth + 1, child_path)
            else:
                tail = _join_tail(path, segments[depth:])
                yield "missing", node, tail

        for status, node, path in walk(tree.root, 0, ""):
            if status == "missing" and rule.rule_kind == "required-argument":
                findings.append(
                    Finding(path, "MissingArgument", None, rule.expected, rule.rationale,
                            rule.remediation, rule.path, rule.rule_kind, tree.doc_index)
                )
            elif status == "present" and rule.rule_kind in ("secured-option-set", "forbidden-option"):
                if not hasattr(node, "value"):
                    continue
                observed = _canonical(node.value)
                bad = observed not in rule.expected if rule.rule_kind == "secured-option-set" else observed in rule.expected
                if bad:
                    findings.append(
                        Finding(path, "InsecureOption", observed, rule.expected, rule.rationale,
                                rule.remediation, rule.path, rule.rule_kind, tree.doc_index)
                    )
    findings.sort(key=lambda f: (f.doc_index, f.path, f.kind, f.rule_path))
    return findings


def _join_tail(prefix, segments):
    path = prefix
    for seg in segments:
        if seg == WILDCARD:
            path = f"{path}[*]"
        elif isinstance(seg, int):
            path = f"{path}[{seg}]"
        else:
            path = f"{path}.{seg}" if path else seg
    return path


def _canonical(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def binary_mcc(tp: int, fp: int, fn: int, tn: int) -> float:
    denom = math.sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn))
    return 0.0 if denom == 0 else (tp * tn - fp * fn) / denom
