from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from confguard.cli import main as cli_main

FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def pipeline(tmp_path_factory) -> dict[str, Path]:
    """Build the full fixture pipeline once: graph, model, enriched graph."""
    out = tmp_path_factory.mktemp("pipeline")
    graph = out / "graph.json"
    model = out / "model.json"
    secgraph = out / "secgraph.json"
    assert cli_main(["build-kg", "--corpus", str(FIXTURES / "corpus/config_docs.jsonl"), "--out", str(graph)]) == 0
    assert (
        cli_main(
            ["train", "--dataset", str(FIXTURES / "dataset/labeled_sentences.csv"), "--out", str(model)]
        )
        == 0
    )
    assert (
        cli_main(
            [
                "enrich",
                "--graph", str(graph),
                "--model", str(model),
                "--docs", str(FIXTURES / "corpus/security_docs.jsonl"),
                "--out", str(secgraph),
            ]
        )
        == 0
    )
    return {"graph": graph, "model": model, "secgraph": secgraph, "dir": out}


@pytest.fixture(scope="session")
def fixture_graph(pipeline):
    from confguard.kg.io import load_graph

    return load_graph(pipeline["graph"])


@pytest.fixture(scope="session")
def enriched_graph(pipeline):
    from confguard.kg.io import load_graph

    return load_graph(pipeline["secgraph"])


@pytest.fixture(scope="session")
def concept_model(pipeline):
    from confguard.concepts import load_model

    return load_model(pipeline["model"])
