"""Format adapters that turn documentation into config records, and the
record-to-graph builder.

The HTML adapter intentionally recognizes only two markup shapes:
definition lists (term/definition pairs) and two-column tables whose
description cell embeds "Default:" / "Type:" / "Options:" lines. Anything
else should be shipped as a pre-normalized jsonl document.
"""

from __future__ import annotations

import json
import logging
import re
from html.parser import HTMLParser

from .corpus import ConfigRecord, RawDocument
from .errors import ExtractionError, SchemaError, UsageError
from .kg.graph import ConfigKnowledgeGraph, EntityKind, Predicate

log = logging.getLogger(__name__)

# Upstream docs mark absent values with these placeholders; they are
# normalized to a missing field and reported, never stored verbatim.
EMPTY_MARKERS = ("[]", '""', "''", "\\")

_META_LINE = re.compile(r"^(Default|Type|Options):\s*(.*)$")


def normalize_field(value: str | None, field_name: str, doc_id: str) -> str | None:
    """Map empty-field markers (and blanks on present lines) to None."""
    if value is None:
        return None
    stripped = value.strip()
    if stripped in EMPTY_MARKERS or stripped == "":
        log.warning("doc %s: empty-field marker %r for %s normalized to absent", doc_id, value, field_name)
        return None
    return stripped


def _parse_block(text: str) -> tuple[str | None, dict[str, str]]:
    """Split a description block into prose and Default/Type/Options lines."""
    meta: dict[str, str] = {}
    prose: list[str] = []
    for line in text.splitlines():
        stripped = line.strip()
        match = _META_LINE.match(stripped)
        if match:
            meta[match.group(1).lower()] = match.group(2)
        elif stripped:
            prose.append(stripped)
    return (" ".join(prose) or None), meta


def _block_to_record(doc: RawDocument, argument: str, block: str) -> ConfigRecord:
    description, meta = _parse_block(block)
    options_raw = normalize_field(meta.get("options"), f"{argument} options", doc.id)
    options: list[str] = []
    if options_raw:
        for part in options_raw.split(","):
            part = part.strip()
            if part and part not in options:
                options.append(part)
    return ConfigRecord(
        system=doc.system,
        component=doc.component,
        argument=argument,
        options=options,
        type_spec=normalize_field(meta.get("type"), f"{argument} type", doc.id),
        default_value=normalize_field(meta.get("default"), f"{argument} default", doc.id),
        description=description,
        source_doc=doc.id,
    )


class _ConfigHTMLParser(HTMLParser):
    """Collects <dt>/<dd> pairs and two-column <tr> rows as (term, block)."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.pairs: list[tuple[str, str]] = []
        self._stack: list[str] = []
        self._buffer: list[str] = []
        self._term: str | None = None
        self._cells: list[str] = []
        self._row_has_header = False

    def handle_starttag(self, tag: str, attrs) -> None:
        if tag in ("dt", "dd", "td", "th"):
            self._stack.append(tag)
            self._buffer = []
        elif tag == "tr":
            self._cells = []
            self._row_has_header = False
        elif tag == "br" and self._stack:
            self._buffer.append("\n")

    def handle_data(self, data: str) -> None:
        if self._stack:
            self._buffer.append(data)

    def handle_endtag(self, tag: str) -> None:
        if self._stack and tag == self._stack[-1]:
            text = "".join(self._buffer)
            self._stack.pop()
            if tag == "dt":
                self._term = " ".join(text.split())
            elif tag == "dd":
                if self._term:
                    self.pairs.append((self._term, text))
                self._term = None
            elif tag == "th":
                self._row_has_header = True
            elif tag == "td":
                self._cells.append(text)
        elif tag == "tr":
            if not self._row_has_header and len(self._cells) == 2:
                term = " ".join(self._cells[0].split())
                if term:
                    self.pairs.append((term, self._cells[1]))
            self._cells = []


class HtmlConfigAdapter:
    formats = ("html",)

    def extract(self, doc: RawDocument) -> list[ConfigRecord]:
        parser = _ConfigHTMLParser()
        try:
            parser.feed(doc.body)
            parser.close()
        except Exception as exc:
            raise ExtractionError(f"doc {doc.id}: unparseable HTML: {exc}") from exc
        return [_block_to_record(doc, term, block) for term, block in parser.pairs]


class JsonlConfigAdapter:
    """Pre-normalized records: one JSON object per body line."""

    formats = ("jsonl",)

    def extract(self, doc: RawDocument) -> list[ConfigRecord]:
        records: list[ConfigRecord] = []
        for lineno, line in enumerate(doc.body.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ExtractionError(f"doc {doc.id}: line {lineno}: invalid JSON: {exc.msg}") from exc
            argument = str(raw.get("argument", ""))
            if not argument:
                raise ExtractionError(f"doc {doc.id}: line {lineno}: record without argument")
            options: list[str] = []
            for part in raw.get("options") or []:
                normalized = normalize_field(str(part), f"{argument} option", doc.id)
                if normalized and normalized not in options:
                    options.append(normalized)
            records.append(
                ConfigRecord(
                    system=doc.system,
                    component=doc.component,
                    argument=argument,
                    options=options,
                    type_spec=normalize_field(raw.get("type"), f"{argument} type", doc.id),
                    default_value=normalize_field(raw.get("default"), f"{argument} default", doc.id),
                    description=normalize_field(raw.get("description"), f"{argument} description", doc.id),
                    source_doc=doc.id,
                )
            )
        return records


ADAPTERS = {"html": HtmlConfigAdapter(), "jsonl": JsonlConfigAdapter()}


def adapter_for(fmt: str):
    return ADAPTERS.get(fmt)


def extract_config_records(doc: RawDocument, adapter) -> list[ConfigRecord]:
    """Run an adapter against a document it is declared to handle."""
    if doc.format not in getattr(adapter, "formats", ()):
        raise UsageError(
            f"adapter for {getattr(adapter, 'formats', ())} cannot extract {doc.format!r} document {doc.id}"
        )
    records = adapter.extract(doc)
    if records and (not doc.component or not doc.system):
        raise ExtractionError(
            f"doc {doc.id}: configuration markup found but system/component metadata is missing"
        )
    return records


def extract_corpus_records(docs: list[RawDocument]) -> list[ConfigRecord]:
    """Extract from every document with a matching adapter; others are skipped."""
    records: list[ConfigRecord] = []
    for doc in docs:
        adapter = adapter_for(doc.format)
        if adapter is None:
            continue
        records.extend(extract_config_records(doc, adapter))
    return records


def build_kgconfig(records: list[ConfigRecord]) -> ConfigKnowledgeGraph:
    """Apply the entity/relation schema to config records.

    Records are sorted before the merge so the produced graph (ids
    included) does not depend on extraction order.
    """
    indexed = sorted(
        enumerate(records),
        key=lambda pair: (pair[1].system, pair[1].component, pair[1].argument, pair[1].source_doc),
    )
    graph = ConfigKnowledgeGraph()
    for index, record in indexed:
        try:
            provenance = {"source_doc": record.source_doc} if record.source_doc else None
            system_id = graph.add_entity(EntityKind.SYSTEM, record.system)
            component_id = graph.add_entity(EntityKind.COMPONENT, record.component)
            argument_id = graph.add_entity(EntityKind.ARGUMENT, record.argument, attrs=provenance)
            graph.add_relation(system_id, Predicate.HAS_COMPONENT, component_id)
            graph.add_relation(component_id, Predicate.HAS_ARGUMENT, argument_id)
            for option in record.options:
                option_id = graph.add_entity(EntityKind.OPTION, option, attrs=provenance, parent=argument_id)
                graph.add_relation(argument_id, Predicate.HAS_OPTION, option_id)
            if record.type_spec:
                type_id = graph.add_entity(EntityKind.TYPE_SPEC, record.type_spec, attrs=provenance, parent=argument_id)
                graph.add_relation(argument_id, Predicate.HAS_TYPE, type_id)
            if record.default_value:
                default_id = graph.add_entity(
                    EntityKind.DEFAULT_VALUE, record.default_value, attrs=provenance, parent=argument_id
                )
                graph.add_relation(argument_id, Predicate.HAS_DEFAULT, default_id)
            if record.description:
                desc_id = graph.add_entity(
                    EntityKind.DESCRIPTION, record.description, attrs=provenance, parent=argument_id
                )
                graph.add_relation(argument_id, Predicate.HAS_DESCRIPTION, desc_id)
        except SchemaError as exc:
            raise SchemaError(f"record {index} ({record.argument!r}): {exc}") from exc
    graph.validate()
    return graph
