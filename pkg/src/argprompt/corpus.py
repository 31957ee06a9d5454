"""Annotated passages: documents, event mentions, and argument spans.

Corpus files are UTF-8 JSONL with one document per line::

    {"doc_id": "d1", "text": "...", "events": [
        {"id": "e1", "event_type": "Attack",
         "trigger": {"start": 23, "end": 28, "text": "fired"},
         "arguments": [{"id": "a1", "start": 14, "end": 18, "text": "bomb",
                        "gold_role": "Instrument", "gold_entity_type": "WEA"}]}]}

Offsets are character offsets into ``text``; ``end`` is exclusive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .ontology import Ontology

__all__ = [
    "ArgumentMention",
    "CorpusError",
    "Document",
    "EventMention",
    "Span",
    "document_from_dict",
    "document_to_dict",
    "iter_arguments",
    "read_corpus",
    "shared_arguments",
    "write_corpus",
]


class CorpusError(ValueError):
    """Raised for unparsable corpus lines or annotations that fail validation."""


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    text: str

    def check(self, doc_text: str, where: str = "span") -> None:
        if not (0 <= self.start < self.end <= len(doc_text)):
            raise CorpusError(
                f"{where}: offsets ({self.start}, {self.end}) out of range for text of "
                f"length {len(doc_text)}"
            )
        actual = doc_text[self.start : self.end]
        if actual != self.text:
            raise CorpusError(
                f"{where}: text {self.text!r} does not match {actual!r} at "
                f"({self.start}, {self.end})"
            )


@dataclass(frozen=True)
class ArgumentMention:
    id: str
    span: Span
    gold_role: str | None = None
    gold_entity_type: str | None = None


@dataclass(frozen=True)
class EventMention:
    id: str
    event_type: str
    trigger: Span
    arguments: tuple[ArgumentMention, ...] = ()

    def argument(self, argument_id: str) -> ArgumentMention:
        for arg in self.arguments:
            if arg.id == argument_id:
                return arg
        raise KeyError(argument_id)


@dataclass(frozen=True)
class Document:
    doc_id: str
    text: str
    events: tuple[EventMention, ...] = ()

    def event(self, event_id: str) -> EventMention:
        for ev in self.events:
            if ev.id == event_id:
                return ev
        raise KeyError(event_id)

    def validate(self, ontology: Ontology | None = None) -> None:
        seen = set()
        for ev in self.events:
            where = f"doc {self.doc_id!r} event {ev.id!r}"
            if ev.id in seen:
                raise CorpusError(f"{where}: duplicate event id")
            seen.add(ev.id)
            ev.trigger.check(self.text, f"{where} trigger")
            if ontology is not None and ev.event_type not in ontology.event_types:
                raise CorpusError(f"{where}: unknown event type {ev.event_type!r}")
            arg_ids = set()
            for arg in ev.arguments:
                awhere = f"{where} argument {arg.id!r}"
                if arg.id in arg_ids:
                    raise CorpusError(f"{awhere}: duplicate argument id")
                arg_ids.add(arg.id)
                arg.span.check(self.text, awhere)
                if ontology is None:
                    continue
                if arg.gold_role is not None and arg.gold_role not in ontology.role_names(
                    ev.event_type
                ):
                    raise CorpusError(
                        f"{awhere}: gold role {arg.gold_role!r} is not a role of {ev.event_type!r}"
                    )
                if (
                    arg.gold_entity_type is not None
                    and arg.gold_entity_type not in ontology.entity_type_names()
                ):
                    raise CorpusError(
                        f"{awhere}: unknown gold entity type {arg.gold_entity_type!r}"
                    )


def _span(raw: dict) -> Span:
    return Span(int(raw["start"]), int(raw["end"]), raw["text"])


def document_from_dict(raw: dict) -> Document:
    try:
        events = []
        for ev in raw.get("events", []):
            args = tuple(
                ArgumentMention(
                    id=str(a["id"]),
                    span=_span(a),
                    gold_role=a.get("gold_role"),
                    gold_entity_type=a.get("gold_entity_type"),
                )
                for a in ev.get("arguments", [])
            )
            events.append(EventMention(str(ev["id"]), ev["event_type"], _span(ev["trigger"]), args))
        return Document(str(raw["doc_id"]), raw["text"], tuple(events))
    except (KeyError, TypeError, ValueError) as exc:
        raise CorpusError(f"malformed document record: {exc!r}") from exc


def document_to_dict(doc: Document) -> dict:
    events = []
    for ev in doc.events:
        args = []
        for a in ev.arguments:
            entry = {"id": a.id, "start": a.span.start, "end": a.span.end, "text": a.span.text}
            if a.gold_role is not None:
                entry["gold_role"] = a.gold_role
            if a.gold_entity_type is not None:
                entry["gold_entity_type"] = a.gold_entity_type
            args.append(entry)
        events.append(
            {
                "id": ev.id,
                "event_type": ev.event_type,
                "trigger": {"start": ev.trigger.start, "end": ev.trigger.end, "text": ev.trigger.text},
                "arguments": args,
            }
        )
    return {"doc_id": doc.doc_id, "text": doc.text, "events": events}


def read_corpus(path: str | Path, ontology: Ontology | None = None) -> list[Document]:
    """Read and validate a JSONL corpus, preserving file order.

    Blank lines are skipped. Errors carry the 1-based line number.
    """
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            try:
                doc = document_from_dict(raw)
                doc.validate(ontology)
            except CorpusError as exc:
                raise CorpusError(f"{path}:{lineno}: {exc}") from exc
            docs.append(doc)
    return docs


def write_corpus(docs, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(document_to_dict(doc), ensure_ascii=False) + "\n")


def iter_arguments(docs) -> Iterator[tuple[Document, EventMention, ArgumentMention]]:
    for doc in docs:
        for ev in doc.events:
            for arg in ev.arguments:
                yield doc, ev, arg


def shared_arguments(
    doc: Document, event_a_type: str, event_b_type: str
) -> list[tuple[EventMention, EventMention, ArgumentMention, ArgumentMention]]:
    """Argument pairs with identical offsets across an ``event_a_type`` and
    an ``event_b_type`` mention of the same document."""
    out = []
    for ev_a in doc.events:
        if ev_a.event_type != event_a_type:
            continue
        for ev_b in doc.events:
            if ev_b.id == ev_a.id or ev_b.event_type != event_b_type:
                continue
            for arg_a in ev_a.arguments:
                for arg_b in ev_b.arguments:
                    if (arg_a.span.start, arg_a.span.end) == (arg_b.span.start, arg_b.span.end):
                        out.append((ev_a, ev_b, arg_a, arg_b))
    return out
