"""Command-line surface for the pipeline: build the graph, filter
security documents, train the concept model, enrich the graph, then check,
fix, summarize and export.

Exit codes: 0 success/compliant, 1 findings present, 2 error. Machine
output goes to stdout or --out files; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import yaml

from . import __version__
from .compliance import (
    check,
    derive_policy,
    emit,
    findings_to_json,
    findings_to_text,
    load_bindings,
    parse_manifest_stream,
    remediate,
)
from .concepts import (
    ConceptModel,
    FeatureConfig,
    cross_validate,
    load_labeled_csv,
    load_model,
    save_model,
)
from .corpus import load_corpus
from .enrich import attach_concepts, extract_secured_options, hotspot_stats, predict_concepts
from .errors import ConfGuardError
from .extract import build_kgconfig, extract_corpus_records
from .kg.io import export_cypher, load_graph, save_graph, summary_line
from .relevancy import build_lexicon, classify_corpus, results_to_jsonl

log = logging.getLogger("confguard")

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_ERROR = 2


def _write_out(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_build_kg(args: argparse.Namespace) -> int:
    docs = load_corpus(args.corpus)
    records = extract_corpus_records(docs)
    graph = build_kgconfig(records)
    save_graph(graph, args.out)
    print(summary_line(graph))
    return EXIT_OK


def cmd_filter_docs(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    docs = load_corpus(args.docs)
    results = classify_corpus(docs, build_lexicon(graph), jobs=args.jobs) if docs else []
    _write_out(args.out, results_to_jsonl(results))
    relevant = sum(r.relevant for r in results)
    log.info("classified %d documents, %d relevant", len(results), relevant)
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    texts, labels = load_labeled_csv(args.dataset)
    feature_cfg = FeatureConfig(mode=args.features, min_df=args.min_df)
    report = cross_validate(
        texts, labels, k=args.folds, seed=args.seed, feature_cfg=feature_cfg
    )
    print(report.to_json(), end="")
    if args.report:
        Path(args.report).write_text(report.to_json(), encoding="utf-8")
    model = ConceptModel(feature_cfg=feature_cfg)
    model.classifier.seed = args.seed
    model.fit(texts, labels)
    save_model(model, args.out)
    log.info("mean MCC %.4f over %d folds; model written to %s", report.mean_mcc, args.folds, args.out)
    return EXIT_OK


def cmd_enrich(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    model = load_model(args.model)
    docs = load_corpus(args.docs)
    lexicon = build_lexicon(graph)
    predictions = predict_concepts(graph, docs, model, lexicon)
    attached = attach_concepts(graph, predictions, threshold=args.threshold)
    pairs = extract_secured_options(graph, predictions, threshold=args.threshold)
    graph.validate()
    save_graph(graph, args.out)
    print(summary_line(graph))
    log.info("attached %d concepts, %d secured-option pairs", attached, len(pairs))
    return EXIT_OK


def _check_one(graph, bindings, path: str, jobs: int):
    trees = parse_manifest_stream(Path(path).read_text(encoding="utf-8"))
    findings = []
    for tree in trees:
        policy = derive_policy(graph, tree.kind, bindings)
        findings.extend(check(tree, policy))
    return trees, findings


def cmd_check(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    bindings = load_bindings(args.bindings)

    def run(path: str):
        return _check_one(graph, bindings, path, args.jobs)

    if args.jobs > 1 and len(args.manifests) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            checked = list(pool.map(run, args.manifests))
    else:
        checked = [run(path) for path in args.manifests]

    all_findings = []
    for path, (_trees, findings) in zip(args.manifests, checked):
        for finding in findings:
            all_findings.append((path, finding))
    if args.format == "json":
        payload = [dict(f.to_dict(), manifest=path) for path, f in all_findings]
        text = json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True) + "\n"
    else:
        text = "".join(f"{path}: {f.to_line()}\n" for path, f in all_findings)
    _write_out(args.out, text)
    return EXIT_FINDINGS if all_findings else EXIT_OK


def cmd_fix(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    bindings = load_bindings(args.bindings)
    trees = parse_manifest_stream(Path(args.manifest).read_text(encoding="utf-8"))
    patched_trees = []
    had_findings = False
    for tree in trees:
        policy = derive_policy(graph, tree.kind, bindings)
        findings = check(tree, policy)
        had_findings = had_findings or bool(findings)
        if args.dry_run:
            sys.stdout.write(findings_to_text(findings))
            continue
        patched, _plan = remediate(tree, findings, policy)
        remaining = check(patched, policy)
        if remaining:
            raise ConfGuardError(f"remediation left {len(remaining)} findings unresolved")
        patched_trees.append(patched)
    if args.dry_run:
        return EXIT_FINDINGS if had_findings else EXIT_OK
    text = (
        emit(patched_trees[0], args.format)
        if len(patched_trees) == 1
        else "---\n".join(emit(t, args.format) for t in patched_trees)
    )
    _write_out(args.out, text)
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    stats = hotspot_stats(graph)
    text = stats.to_json() if args.format == "json" else stats.to_table()
    _write_out(args.out, text)
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    if args.format != "cypher":
        raise ConfGuardError(f"unsupported export format {args.format!r}")
    _write_out(args.out, export_cypher(graph))
    return EXIT_OK


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load_config_defaults(argv: list[str]) -> dict:
    """Read the optional --config YAML; explicit flags override its values."""
    if "--config" not in argv:
        return {}
    path = argv[argv.index("--config") + 1]
    raw = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    if not isinstance(raw, dict):
        raise ConfGuardError(f"config file {path} must be a YAML mapping")
    return {str(k).replace("-", "_"): v for k, v in raw.items()}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confguard",
        description="Configuration-security knowledge graph and manifest compliance toolkit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="YAML file with default flag values")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-kg", help="build the configuration graph from a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_kg)

    p = sub.add_parser("filter-docs", help="estimate document relevancy to configuration")
    p.add_argument("--graph", required=True)
    p.add_argument("--docs", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_filter_docs)

    p = sub.add_parser("train", help="cross-validate and train the concept classifier")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True, help="model file path")
    p.add_argument("--report", default=None, help="also write the CV report JSON here")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--features", default="word+char", choices=["word", "char", "word+char", "nlp"])
    p.add_argument("--min-df", type=int, default=1)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("enrich", help="attach concepts and secured options to the graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--docs", required=True, help="security document corpus (JSONL)")
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_enrich)

    p = sub.add_parser("check", help="detect manifest misconfigurations")
    p.add_argument("--graph", required=True)
    p.add_argument("--bindings", required=True)
    p.add_argument("--format", default="text", choices=["text", "json"])
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("manifests", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fix", help="check, remediate, and emit a secured manifest")
    p.add_argument("--graph", required=True)
    p.add_argument("--bindings", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--format", default="yaml", choices=["yaml", "json"])
    p.add_argument("--dry-run", action="store_true")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_fix)

    p = sub.add_parser("stats", help="print configuration hot-spot statistics")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", default="text", choices=["text", "json"])
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("export", help="export the graph for external tools")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", default="cypher", choices=["cypher"])
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        defaults = _load_config_defaults(argv)
        args = parser.parse_args(argv)
        for key, value in defaults.items():
            flag = "--" + key.replace("_", "-")
            if flag not in argv and hasattr(args, key):
                setattr(args, key, value)
        logging.basicConfig(
            stream=sys.stderr,
            level=logging.DEBUG if args.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
        return args.func(args)
    except ConfGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def entrypoint() -> None:  # console script
    sys.exit(main())
