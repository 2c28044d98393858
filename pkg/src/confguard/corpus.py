"""Offline corpus loading and sentence splitting.

A corpus is a JSON Lines file with one document per line carrying
{id, source, format, uri, system, component, body}. Documents are never
fetched from the network; the uri field is provenance only.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError

SOURCES = ("official-doc", "security-advisory", "internet-artifact", "whitepaper")
FORMATS = ("html", "markdown", "plaintext", "jsonl")


@dataclass
class RawDocument:
    id: str
    source: str
    format: str
    uri: str
    body: str
    system: str = ""
    component: str = ""

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("document id must be non-empty")
        if self.source not in SOURCES:
            raise ValidationError(f"document {self.id!r}: unknown source {self.source!r}")
        if self.format not in FORMATS:
            raise ValidationError(f"document {self.id!r}: unknown format {self.format!r}")
        if not self.body:
            raise ValidationError(f"document {self.id!r}: body must be non-empty")


@dataclass
class ConfigRecord:
    """One documented configuration argument, with syntax preserved exactly."""

    system: str
    component: str
    argument: str
    options: list[str] = field(default_factory=list)
    type_spec: str | None = None
    default_value: str | None = None
    description: str | None = None
    source_doc: str = ""

    def __post_init__(self) -> None:
        if not self.argument:
            raise ValidationError("config record argument must be non-empty")
        if len(set(self.options)) != len(self.options):
            raise ValidationError(f"record {self.argument!r}: duplicate options")


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    index: int
    text: str


def load_corpus(path: str | Path) -> list[RawDocument]:
    """Load documents in file order; duplicate ids are rejected."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read corpus {path}: {exc}") from exc
    documents: list[RawDocument] = []
    seen: set[str] = set()
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
        try:
            doc = RawDocument(
                id=str(record["id"]),
                source=str(record["source"]),
                format=str(record["format"]),
                uri=str(record.get("uri", "")),
                body=str(record["body"]),
                system=str(record.get("system", "")),
                component=str(record.get("component", "")),
            )
        except KeyError as exc:
            raise ParseError(f"{path}:{lineno}: missing field {exc}") from exc
        if doc.id in seen:
            raise ValidationError(f"{path}:{lineno}: duplicate document id {doc.id!r}")
        seen.add(doc.id)
        documents.append(doc)
    return documents


# Splitting after these tokens produces the truncated-description failure
# mode, so they always suppress a boundary.
PROTECTED_ABBREVIATIONS = frozenset({"e.g.", "i.e.", "etc.", "vs.", "cf."})

_BOUNDARY = re.compile(r"[.!?]+")
_SINGLE_INITIAL = re.compile(r"^[A-Z][.!?]+$")
_OPENERS = "\"'“‘`([-–—"


def _next_word(text: str, start: int) -> str:
    match = re.match(r"\s*[^\sA-Za-z]*([A-Za-z]*)", text[start:])
    return match.group(1) if match else ""


def split_sentences(text: str, doc_id: str = "") -> list[Sentence]:
    """Rule-based splitter that never breaks after protected abbreviations.

    A boundary is a punctuation run followed by whitespace and a capital,
    quote, or dash. Runs ending a listed abbreviation never split; a
    single-initial token ("M.") only splits when the next word is not a
    plausible name continuation (a capitalized word of length >= 2).
    """
    sentences: list[str] = []
    start = 0
    for match in _BOUNDARY.finditer(text):
        end = match.end()
        if end >= len(text):
            break
        if not text[end].isspace():
            continue
        follow = text[end:].lstrip()
        if not follow:
            break
        if not (follow[0].isupper() or follow[0] in _OPENERS):
            continue
        token = text[start:end].rsplit(None, 1)[-1] if text[start:end].strip() else ""
        if token.lower() in PROTECTED_ABBREVIATIONS:
            continue
        if _SINGLE_INITIAL.match(token):
            word = _next_word(text, end)
            if len(word) >= 2 and word[0].isupper():
                continue
        chunk = text[start:end].strip()
        if chunk:
            sentences.append(chunk)
        start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return [Sentence(doc_id, i, s) for i, s in enumerate(sentences)]
