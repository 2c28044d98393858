import glob
from pathlib import Path

import pytest

from confguard.compliance.tree import (
    ComplianceParseTree,
    LeafNode,
    MapNode,
    emit,
    emit_stream,
    node_at,
    parse_manifest,
    parse_manifest_stream,
    parse_path,
    scalar_tag,
)
from confguard.errors import ParseError, UsageError, ValidationError


def manifest_paths(fixtures_dir):
    root = str(fixtures_dir / "manifests")
    return sorted(glob.glob(root + "/**/*.yaml", recursive=True)) + sorted(
        glob.glob(root + "/**/*.json", recursive=True)
    )


def test_fig_style_deployment(fixtures_dir):
    tree = parse_manifest((fixtures_dir / "manifests/deployment_insecure.yaml").read_text())
    assert tree.kind == "Deployment"
    leaf = node_at(tree, "spec.template.spec.containers[0].imagePullPolicy")
    assert isinstance(leaf, LeafNode)
    assert leaf.value == "Always"
    assert leaf.tag == "text"


def test_minimal_manifest():
    tree = parse_manifest("kind: Pod\n")
    assert tree.kind == "Pod"
    assert list(tree.root.children) == ["kind"]


def test_missing_kind_rejected():
    with pytest.raises(ValidationError):
        parse_manifest("apiVersion: v1\nmetadata:\n  name: x\n")


def test_malformed_yaml_reports_line():
    with pytest.raises(ParseError) as err:
        parse_manifest("kind: Pod\nspec: [unclosed\n")
    assert "line" in str(err.value)


def test_scalar_tags():
    tree = parse_manifest(
        "kind: Pod\ncount: 3\nratio: 0.5\nflag: true\nempty: null\nname: web\n"
    )
    tags = {key: child.tag for key, child in tree.root.children.items() if isinstance(child, LeafNode)}
    assert tags == {
        "kind": "text",
        "count": "integer",
        "ratio": "float",
        "flag": "boolean",
        "empty": "null",
        "name": "text",
    }
    assert scalar_tag(True) == "boolean"
    assert scalar_tag(1) == "integer"


def test_key_order_preserved(fixtures_dir):
    tree = parse_manifest((fixtures_dir / "manifests/deployment_insecure.yaml").read_text())
    assert list(tree.root.children) == ["apiVersion", "kind", "metadata", "spec"]
    out = emit(tree, "yaml")
    assert out.index("apiVersion") < out.index("kind:") < out.index("metadata") < out.index("spec")


def test_round_trip_all_fixture_manifests(fixtures_dir):
    total = 0
    for path in manifest_paths(fixtures_dir):
        trees = parse_manifest_stream(Path(path).read_text())
        assert parse_manifest_stream(emit_stream(trees, "yaml")) == trees, path
        assert parse_manifest_stream(emit_stream(trees, "json")) == trees, path
        total += len(trees)
    assert total >= 20


def test_yaml_and_json_agree(fixtures_dir):
    tree = parse_manifest((fixtures_dir / "manifests/deployment_compliant.yaml").read_text())
    via_yaml = parse_manifest(emit(tree, "yaml"))
    via_json = parse_manifest(emit(tree, "json"))
    assert via_yaml == via_json == tree


def test_two_space_indentation(fixtures_dir):
    tree = parse_manifest((fixtures_dir / "manifests/deployment_insecure.yaml").read_text())
    out = emit(tree, "yaml")
    assert "\n  name: web-frontend" in out or "\n  name: web-frontend\n" in out
    assert "\n    app: web-frontend" in out


def test_multi_document_stream_indices(fixtures_dir):
    trees = parse_manifest_stream((fixtures_dir / "manifests/roundtrip/m19_stream.yaml").read_text())
    assert [t.doc_index for t in trees] == [0, 1, 2]
    assert [t.kind for t in trees] == ["Namespace", "Pod", "Service"]


def test_single_doc_parse_rejects_stream(fixtures_dir):
    with pytest.raises(ValidationError):
        parse_manifest((fixtures_dir / "manifests/roundtrip/m19_stream.yaml").read_text())


def test_empty_stream_rejected():
    with pytest.raises(ValidationError):
        parse_manifest_stream("---\n---\n")


def test_unknown_format_rejected():
    tree = parse_manifest("kind: Pod\n")
    with pytest.raises(UsageError):
        emit(tree, "toml")


def test_strings_that_look_like_scalars_stay_quoted():
    tree = ComplianceParseTree("Pod", MapNode({"kind": LeafNode("Pod"), "version": LeafNode("true")}))
    out = emit(tree, "yaml")
    assert parse_manifest(out) == tree  # "true" string survives, not boolean


def test_parse_path_segments():
    assert parse_path("spec.containers[0].name") == ["spec", "containers", 0, "name"]
    assert parse_path("a.b[*].c") == ["a", "b", "*", "c"]
    with pytest.raises(ValidationError):
        parse_path("")


def test_node_at_missing_returns_none(fixtures_dir):
    tree = parse_manifest((fixtures_dir / "manifests/deployment_insecure.yaml").read_text())
    assert node_at(tree, "spec.template.spec.hostNetwork") is None
    assert node_at(tree, "spec.template.spec.containers[5]") is None
