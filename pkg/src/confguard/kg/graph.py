"""Typed property graph for configuration knowledge.

Entities carry a kind, an exact surface label, and a free-form attribute
bag. Relations are (subject, predicate, object) triples constrained by a
fixed domain/range schema, so the predicate-edge graph always flows
System -> Component -> Argument -> leaf kinds and stays acyclic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from ..errors import IntegrityError, SchemaError, ValidationError


class EntityKind(str, Enum):
    SYSTEM = "System"
    COMPONENT = "Component"
    ARGUMENT = "Argument"
    OPTION = "Option"
    TYPE_SPEC = "TypeSpec"
    DEFAULT_VALUE = "DefaultValue"
    DESCRIPTION = "Description"
    STATEMENT = "Statement"
    GOAL = "Goal"
    ACTION = "Action"


class Predicate(str, Enum):
    HAS_COMPONENT = "hasComponent"
    HAS_ARGUMENT = "hasArgument"
    HAS_OPTION = "hasOption"
    HAS_TYPE = "hasType"
    HAS_DEFAULT = "hasDefault"
    HAS_DESCRIPTION = "hasDescription"
    HAS_STATEMENT = "hasStatement"
    HAS_GOAL = "hasGoal"
    HAS_ACTION = "hasAction"
    HAS_SECURED_OPTION = "hasSecuredOption"


# Domain/range schema: predicate -> (subject kind, allowed object kinds).
SCHEMA: dict[Predicate, tuple[EntityKind, frozenset[EntityKind]]] = {
    Predicate.HAS_COMPONENT: (EntityKind.SYSTEM, frozenset({EntityKind.COMPONENT})),
    Predicate.HAS_ARGUMENT: (EntityKind.COMPONENT, frozenset({EntityKind.ARGUMENT})),
    Predicate.HAS_OPTION: (EntityKind.ARGUMENT, frozenset({EntityKind.OPTION})),
    Predicate.HAS_SECURED_OPTION: (EntityKind.ARGUMENT, frozenset({EntityKind.OPTION})),
    Predicate.HAS_TYPE: (EntityKind.ARGUMENT, frozenset({EntityKind.TYPE_SPEC})),
    Predicate.HAS_DEFAULT: (EntityKind.ARGUMENT, frozenset({EntityKind.DEFAULT_VALUE})),
    Predicate.HAS_DESCRIPTION: (EntityKind.ARGUMENT, frozenset({EntityKind.DESCRIPTION})),
    Predicate.HAS_STATEMENT: (EntityKind.ARGUMENT, frozenset({EntityKind.STATEMENT})),
    Predicate.HAS_GOAL: (EntityKind.ARGUMENT, frozenset({EntityKind.GOAL})),
    Predicate.HAS_ACTION: (EntityKind.ARGUMENT, frozenset({EntityKind.ACTION})),
}

# Kinds whose labels are deduplicated per parent Argument rather than
# globally: the string "true" under two arguments is two entities.
PARENT_SCOPED_KINDS = frozenset(
    {
        EntityKind.OPTION,
        EntityKind.TYPE_SPEC,
        EntityKind.DEFAULT_VALUE,
        EntityKind.DESCRIPTION,
    }
)

# Strict level ordering of kinds; every predicate points from a lower to a
# higher level, which is what makes cycles impossible at insert time.
_KIND_LEVEL = {
    EntityKind.SYSTEM: 0,
    EntityKind.COMPONENT: 1,
    EntityKind.ARGUMENT: 2,
    EntityKind.OPTION: 3,
    EntityKind.TYPE_SPEC: 3,
    EntityKind.DEFAULT_VALUE: 3,
    EntityKind.DESCRIPTION: 3,
    EntityKind.STATEMENT: 3,
    EntityKind.GOAL: 3,
    EntityKind.ACTION: 3,
}

_ID_PATTERN = re.compile(r"^e(\d+)$")


@dataclass
class Entity:
    id: str
    kind: EntityKind
    label: str
    attrs: dict[str, str] = field(default_factory=dict)


Triple = tuple[str, str, str]


class ConfigKnowledgeGraph:
    """Entity/relation store with consistent label and adjacency indexes.

    Construction is single-writer; once built the graph is safe to share
    across concurrent readers because every query method is read-only.
    """

    def __init__(self) -> None:
        self._entities: dict[str, Entity] = {}
        self._triples: set[Triple] = set()
        self._out: dict[tuple[str, str], set[str]] = {}
        self._in: dict[tuple[str, str], set[str]] = {}
        self._label_index: dict[tuple[str, EntityKind], set[str]] = {}
        self._identity: dict[tuple[EntityKind, str, str | None], str] = {}
        self._next_id = 1

    # -- mutation ---------------------------------------------------------

    def add_entity(
        self,
        kind: EntityKind,
        label: str,
        attrs: dict[str, str] | None = None,
        parent: str | None = None,
    ) -> str:
        """Upsert an entity and return its id.

        Identity is (kind, label, parent) for parent-scoped kinds and
        (kind, label) otherwise; repeating an insert returns the existing
        id and only fills in attribute keys that are still missing.
        """
        kind = EntityKind(kind)
        if not label:
            raise ValidationError(f"{kind.value} label must be non-empty")
        if kind in PARENT_SCOPED_KINDS:
            if parent is None:
                raise ValidationError(f"{kind.value} entity requires a parent argument id")
            if parent not in self._entities:
                raise IntegrityError(f"unknown parent entity {parent!r}")
            key = (kind, label, parent)
        else:
            key = (kind, label, None)

        existing = self._identity.get(key)
        if existing is not None:
            if attrs:
                bag = self._entities[existing].attrs
                for k, v in attrs.items():
                    bag.setdefault(str(k), str(v))
            return existing

        entity_id = f"e{self._next_id:06d}"
        self._next_id += 1
        entity = Entity(entity_id, kind, label, {str(k): str(v) for k, v in (attrs or {}).items()})
        self._entities[entity_id] = entity
        self._identity[key] = entity_id
        self._label_index.setdefault((label, kind), set()).add(entity_id)
        return entity_id

    def add_relation(self, subject: str, predicate: Predicate, obj: str) -> None:
        """Insert a triple; duplicates are a no-op."""
        predicate = Predicate(predicate)
        for endpoint in (subject, obj):
            if endpoint not in self._entities:
                raise IntegrityError(f"relation endpoint {endpoint!r} does not exist")
        domain, rng = SCHEMA[predicate]
        s_kind = self._entities[subject].kind
        o_kind = self._entities[obj].kind
        if s_kind is not domain:
            raise SchemaError(
                f"{predicate.value} requires a {domain.value} subject, got {s_kind.value}"
            )
        if o_kind not in rng:
            raise SchemaError(
                f"{predicate.value} cannot point at a {o_kind.value} entity"
            )
        triple = (subject, predicate.value, obj)
        if triple in self._triples:
            return
        self._triples.add(triple)
        self._out.setdefault((subject, predicate.value), set()).add(obj)
        self._in.setdefault((obj, predicate.value), set()).add(subject)

    # -- queries ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._entities)

    @property
    def num_entities(self) -> int:
        return len(self._entities)

    @property
    def num_triples(self) -> int:
        return len(self._triples)

    def entity(self, entity_id: str) -> Entity:
        try:
            return self._entities[entity_id]
        except KeyError:
            raise IntegrityError(f"unknown entity {entity_id!r}") from None

    def has_entity(self, entity_id: str) -> bool:
        return entity_id in self._entities

    def entities(self) -> list[Entity]:
        return [self._entities[i] for i in sorted(self._entities)]

    def entities_of_kind(self, kind: EntityKind) -> list[str]:
        kind = EntityKind(kind)
        return sorted(i for i, e in self._entities.items() if e.kind is kind)

    def triples(self) -> list[Triple]:
        return sorted(self._triples)

    @staticmethod
    def _pred(predicate: Predicate | str) -> str:
        return predicate.value if isinstance(predicate, Predicate) else str(predicate)

    def has_triple(self, subject: str, predicate: Predicate | str, obj: str) -> bool:
        return (subject, self._pred(predicate), obj) in self._triples

    def out(self, subject: str, predicate: Predicate | str) -> tuple[str, ...]:
        return tuple(sorted(self._out.get((subject, self._pred(predicate)), ())))

    def incoming(self, obj: str, predicate: Predicate | str) -> tuple[str, ...]:
        return tuple(sorted(self._in.get((obj, self._pred(predicate)), ())))

    def find_entity(self, label: str, kind: EntityKind) -> str | None:
        """Exact, case-sensitive (label, kind) lookup via the label index.

        Returns the smallest matching id so the result agrees with the
        traversal-based lookup; not-found is a normal None result.
        """
        ids = self._label_index.get((label, EntityKind(kind)))
        return min(ids) if ids else None

    def find_entity_bfs(self, label: str, kind: EntityKind) -> str | None:
        """Reference lookup: breadth-first search from the System roots.

        Collects every reachable match and returns the smallest id; used
        to cross-check the indexed fast path.
        """
        kind = EntityKind(kind)
        roots = self.entities_of_kind(EntityKind.SYSTEM)
        seen: set[str] = set(roots)
        queue = list(roots)
        matches: list[str] = []
        while queue:
            current = queue.pop(0)
            entity = self._entities[current]
            if entity.kind is kind and entity.label == label:
                matches.append(current)
            for predicate in Predicate:
                for nxt in self.out(current, predicate):
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
        return min(matches) if matches else None

    # -- validation -------------------------------------------------------

    def validate(self) -> None:
        """Check referential integrity, schema conformance and acyclicity."""
        for s, p, o in self._triples:
            if s not in self._entities or o not in self._entities:
                raise IntegrityError(f"dangling triple ({s}, {p}, {o})")
            domain, rng = SCHEMA[Predicate(p)]
            if self._entities[s].kind is not domain or self._entities[o].kind not in rng:
                raise SchemaError(f"triple ({s}, {p}, {o}) violates domain/range")
        # Kahn's algorithm over the full edge set.
        indegree = {i: 0 for i in self._entities}
        for _, _, o in self._triples:
            indegree[o] += 1
        queue = [i for i, d in indegree.items() if d == 0]
        visited = 0
        while queue:
            node = queue.pop()
            visited += 1
            for predicate in Predicate:
                for nxt in self._out.get((node, predicate.value), ()):
                    indegree[nxt] -= 1
                    if indegree[nxt] == 0:
                        queue.append(nxt)
        if visited != len(self._entities):
            raise SchemaError("predicate-edge graph contains a cycle")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConfigKnowledgeGraph):
            return NotImplemented
        mine = {(e.id, e.kind, e.label, tuple(sorted(e.attrs.items()))) for e in self._entities.values()}
        theirs = {(e.id, e.kind, e.label, tuple(sorted(e.attrs.items()))) for e in other._entities.values()}
        return mine == theirs and self._triples == other._triples

    # -- pattern-matcher view ----------------------------------------------

    def node_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._entities))

    def node_kind(self, node_id: str) -> str:
        return self._entities[node_id].kind.value

    def node_label(self, node_id: str) -> str:
        return self._entities[node_id].label

    def has_edge(self, subject: str, predicate: str, obj: str) -> bool:
        return self.has_triple(subject, predicate, obj)

    def out_edges(self, subject: str, predicate: str) -> tuple[str, ...]:
        return self.out(subject, predicate)

    def in_edges(self, obj: str, predicate: str) -> tuple[str, ...]:
        return self.incoming(obj, predicate)

    def candidates(self, kind: str, label: str | None) -> tuple[str, ...]:
        if label is not None:
            ids = self._label_index.get((label, EntityKind(kind)), set())
            return tuple(sorted(ids))
        return tuple(self.entities_of_kind(EntityKind(kind)))

    # -- reconstruction (used by deserialization) --------------------------

    def _restore(self, entities: list[Entity], triples: list[Triple]) -> None:
        """Rebuild all indexes from already-validated parts."""
        for entity in entities:
            if entity.id in self._entities:
                raise ValidationError(f"duplicate entity id {entity.id!r}")
            if not entity.label:
                raise ValidationError(f"entity {entity.id!r} has an empty label")
            self._entities[entity.id] = entity
            self._label_index.setdefault((entity.label, entity.kind), set()).add(entity.id)
            match = _ID_PATTERN.match(entity.id)
            if match:
                self._next_id = max(self._next_id, int(match.group(1)) + 1)
        for s, p, o in triples:
            self.add_relation(s, Predicate(p), o)
        # Rebuild upsert identity keys; parent scope comes from the incoming edge.
        for entity_id in sorted(self._entities):
            entity = self._entities[entity_id]
            if entity.kind in PARENT_SCOPED_KINDS:
                parents = [
                    s
                    for (o, _p), subjects in self._in.items()
                    if o == entity_id
                    for s in subjects
                ]
                if not parents:
                    continue
                key = (entity.kind, entity.label, min(parents))
            else:
                key = (entity.kind, entity.label, None)
            self._identity.setdefault(key, entity_id)
        self.validate()
