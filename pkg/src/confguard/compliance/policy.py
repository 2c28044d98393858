"""Policy rules derived from the enriched knowledge graph.

The binding file is the explicit, auditable mapping from manifest key
paths to knowledge-graph argument labels; nothing here guesses at name
correspondence.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import yaml

from ..errors import ParseError, ValidationError
from ..kg.graph import ConfigKnowledgeGraph, EntityKind, Predicate
from .tree import canonical, parse_path

log = logging.getLogger(__name__)

RULE_KINDS = ("required-argument", "secured-option-set", "forbidden-option")


@dataclass(frozen=True)
class Binding:
    kind: str  # manifest kind, e.g. Deployment
    path: str
    argument: str  # knowledge-graph argument label
    required: bool = False
    remediation: object = None


@dataclass(frozen=True)
class PolicyRule:
    applies_to: str
    path: str
    rule_kind: str
    expected: tuple[str, ...]
    remediation: object
    rationale: str
    argument_id: str
    argument_label: str

    def __post_init__(self) -> None:
        if self.rule_kind not in RULE_KINDS:
            raise ValidationError(f"unknown rule kind {self.rule_kind!r}")
        if self.rule_kind == "secured-option-set":
            if not self.expected:
                raise ValidationError(f"rule for {self.path!r}: expected option set is empty")
            if canonical(self.remediation) not in self.expected:
                raise ValidationError(
                    f"rule for {self.path!r}: remediation {self.remediation!r} not in expected set"
                )


def load_bindings(path: str | Path) -> list[Binding]:
    """Read the YAML binding list {kind, path, argument, required, remediation}."""
    try:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ParseError(f"binding file {path}: {exc}") from exc
    if not isinstance(raw, list):
        raise ValidationError(f"binding file {path}: expected a YAML list")
    bindings: list[Binding] = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict) or "kind" not in entry or "path" not in entry or "argument" not in entry:
            raise ValidationError(f"binding file {path}: entry {i} needs kind/path/argument")
        parse_path(str(entry["path"]))  # syntax check
        bindings.append(
            Binding(
                kind=str(entry["kind"]),
                path=str(entry["path"]),
                argument=str(entry["argument"]),
                required=bool(entry.get("required", False)),
                remediation=entry.get("remediation"),
            )
        )
    return bindings


def coerce_option_value(label: str) -> object:
    """Interpret a stored option label as a typed manifest scalar."""
    if label == "true":
        return True
    if label == "false":
        return False
    if label == "null":
        return None
    try:
        return int(label)
    except ValueError:
        pass
    try:
        return float(label)
    except ValueError:
        pass
    return label


def derive_policy(
    graph: ConfigKnowledgeGraph, kind: str, bindings: list[Binding]
) -> list[PolicyRule]:
    """Turn bindings plus graph knowledge into checkable rules.

    Bound arguments with secured options yield a secured-option-set rule;
    bindings flagged required additionally yield a required-argument rule.
    Bindings whose argument is not in the graph are skipped with a warning.
    """
    rules: list[PolicyRule] = []
    for binding in bindings:
        if binding.kind != kind:
            continue
        argument_id = graph.find_entity(binding.argument, EntityKind.ARGUMENT)
        if argument_id is None:
            log.warning("binding %s: argument %r not found in graph; skipped", binding.path, binding.argument)
            continue
        secured = tuple(
            sorted(
                graph.entity(o).label
                for o in graph.out(argument_id, Predicate.HAS_SECURED_OPTION)
            )
        )
        rationale = "; ".join(
            sorted(graph.entity(g).label for g in graph.out(argument_id, Predicate.HAS_GOAL))
        )
        remediation = binding.remediation
        if remediation is None and secured:
            remediation = coerce_option_value(secured[0])
        if secured:
            rules.append(
                PolicyRule(
                    applies_to=kind,
                    path=binding.path,
                    rule_kind="secured-option-set",
                    expected=secured,
                    remediation=remediation,
                    rationale=rationale,
                    argument_id=argument_id,
                    argument_label=binding.argument,
                )
            )
        if binding.required:
            rules.append(
                PolicyRule(
                    applies_to=kind,
                    path=binding.path,
                    rule_kind="required-argument",
                    expected=secured,
                    remediation=remediation,
                    rationale=rationale,
                    argument_id=argument_id,
                    argument_label=binding.argument,
                )
            )
    rules.sort(key=lambda r: (r.path, r.rule_kind))
    return rules
