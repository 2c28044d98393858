from .graph import ConfigKnowledgeGraph, Entity, EntityKind, Predicate, PARENT_SCOPED_KINDS, SCHEMA
from .io import deserialize, export_cypher, load_graph, save_graph, serialize, summary_line
from .pattern import GraphPattern, PatternEdge, PatternNode, match

__all__ = [
    "ConfigKnowledgeGraph",
    "Entity",
    "EntityKind",
    "Predicate",
    "PARENT_SCOPED_KINDS",
    "SCHEMA",
    "GraphPattern",
    "PatternEdge",
    "PatternNode",
    "match",
    "serialize",
    "deserialize",
    "save_graph",
    "load_graph",
    "export_cypher",
    "summary_line",
]
