"""confguard: configuration-security knowledge graph construction and
orchestrator manifest compliance checking."""

__version__ = "0.1.0"

from .kg import ConfigKnowledgeGraph, EntityKind, GraphPattern, Predicate

__all__ = ["ConfigKnowledgeGraph", "EntityKind", "GraphPattern", "Predicate", "__version__"]
