from .checker import Finding, TreeGraphView, check, findings_to_json, findings_to_text, rule_pattern
from .policy import Binding, PolicyRule, coerce_option_value, derive_policy, load_bindings
from .remediate import InsertSubtree, RemediationPlan, ReplaceLeaf, remediate
from .tree import (
    ComplianceParseTree,
    LeafNode,
    ListNode,
    MapNode,
    canonical,
    emit,
    emit_stream,
    join_path,
    node_at,
    parse_manifest,
    parse_manifest_stream,
    parse_path,
    scalar_tag,
)

__all__ = [
    "Binding",
    "ComplianceParseTree",
    "Finding",
    "InsertSubtree",
    "LeafNode",
    "ListNode",
    "MapNode",
    "PolicyRule",
    "RemediationPlan",
    "ReplaceLeaf",
    "TreeGraphView",
    "canonical",
    "check",
    "coerce_option_value",
    "derive_policy",
    "emit",
    "emit_stream",
    "findings_to_json",
    "findings_to_text",
    "join_path",
    "load_bindings",
    "node_at",
    "parse_manifest",
    "parse_manifest_stream",
    "parse_path",
    "remediate",
    "rule_pattern",
    "scalar_tag",
]
