"""Prefix and cloze prompt construction.

Every candidate label yields one prompted passage::

    <prefix> <text before span><span> and any other <label><text after span>
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .corpus import ArgumentMention, CorpusError, Document, EventMention, Span
from .ontology import Ontology

__all__ = [
    "CLOZE_CONNECTOR",
    "PrefixVariant",
    "PromptedPassage",
    "Task",
    "build_cloze_passage",
    "build_prefix",
    "generate_candidates",
    "sentence_window",
]

CLOZE_CONNECTOR = " and any other "


class Task(str, enum.Enum):
    EAC = "EAC"  # argument role
    EAET = "EAET"  # argument entity type


class PrefixVariant(str, enum.Enum):
    FULL = "full"
    NO_EVENT_TYPE = "no-event-type"
    NO_TRIGGER = "no-trigger"
    NONE = "none"
    ALT1 = "alt1"
    ALT2 = "alt2"
    ALT3 = "alt3"


# The article stays "a" regardless of the event type ("a Attack event").
_TEMPLATES = {
    PrefixVariant.FULL: 'This is a {T} event whose occurrence is most clearly expressed by "{g}."',
    PrefixVariant.NO_EVENT_TYPE: 'This event\'s occurrence is most clearly expressed by "{g}."',
    PrefixVariant.NO_TRIGGER: "This is a {T} event.",
    PrefixVariant.NONE: "",
    PrefixVariant.ALT1: 'This is a {T} event whose trigger is "{g}".',
    PrefixVariant.ALT2: 'The event type is {T}, and its occurrence is most clearly expressed by "{g}".',
    PrefixVariant.ALT3: 'The event type is {T} and the trigger is "{g}".',
}

_NEEDS_TRIGGER = {
    PrefixVariant.FULL,
    PrefixVariant.NO_EVENT_TYPE,
    PrefixVariant.ALT1,
    PrefixVariant.ALT2,
    PrefixVariant.ALT3,
}


def build_prefix(event_type: str, trigger_text: str, variant: PrefixVariant | str = "full") -> str:
    """Prefix prompt naming the event subtype and quoting the trigger.

    >>> build_prefix("Attack", "fired", "no-trigger")
    'This is a Attack event.'
    """
    variant = PrefixVariant(variant)
    if variant in _NEEDS_TRIGGER and not trigger_text:
        raise ValueError(f"prefix variant {variant.value!r} needs a trigger")
    return _TEMPLATES[variant].format(T=event_type, g=trigger_text)


def build_cloze_passage(doc_text: str, arg_span: Span, filler: str) -> str:
    """Insert ``" and any other {filler}"`` right after ``arg_span``."""
    if not filler:
        raise ValueError("cloze filler must be non-empty")
    arg_span.check(doc_text, "argument span")
    return doc_text[: arg_span.end] + CLOZE_CONNECTOR + filler + doc_text[arg_span.end :]


_SENTENCE_END = re.compile(r"(?<=[.!?])\s+")


def sentence_window(text: str, *spans: Span) -> tuple[int, int]:
    """Character range of the sentences covering all ``spans``."""
    bounds = [0] + [m.end() for m in _SENTENCE_END.finditer(text)]
    lo = min(s.start for s in spans)
    hi = max(s.end for s in spans)
    start = max(b for b in bounds if b <= lo)
    later = [b for b in bounds if b >= hi]
    end = later[0] if later else len(text)
    return start, len(text[:end].rstrip())


@dataclass(frozen=True)
class PromptedPassage:
    full_text: str
    label: str
    filler: str
    task: Task
    argument_id: str
    event_id: str


def generate_candidates(
    doc: Document,
    event: EventMention,
    arg: ArgumentMention,
    task: Task | str,
    ontology: Ontology,
    prefix: PrefixVariant | str = PrefixVariant.FULL,
    *,
    restrict_entity_types: bool = False,
    window: str = "document",
) -> list[PromptedPassage]:
    """One prompted passage per candidate label, in ontology order.

    EAC candidates are the roles of ``event.event_type``; EAET candidates
    are all entity types, or only those admissible for some role when
    ``restrict_entity_types`` is set. ``window="sentence"`` trims the
    passage to the sentences spanning the trigger and the argument.
    """
    task = Task(task)
    if task is Task.EAC:
        labels = [(r.name, r.verbalization) for r in ontology.roles_by_event[event.event_type]]
    else:
        names = (
            ontology.reachable_entity_types()
            if restrict_entity_types
            else ontology.entity_type_names()
        )
        labels = [(n, ontology.entity_type(n).verbalization) for n in names]
    if not labels:
        raise ValueError(f"no {task.value} candidates for event {event.id!r}")

    text, span = doc.text, arg.span
    if window == "sentence":
        lo, hi = sentence_window(doc.text, event.trigger, arg.span)
        text = doc.text[lo:hi]
        span = Span(span.start - lo, span.end - lo, span.text)
    elif window != "document":
        raise ValueError(f"unknown passage window {window!r}")
    try:
        span.check(text, f"argument {arg.id!r}")
    except CorpusError as exc:
        raise ValueError(str(exc)) from exc

    head = build_prefix(event.event_type, event.trigger.text, prefix)
    joiner = " " if head else ""
    return [
        PromptedPassage(
            full_text=head + joiner + build_cloze_passage(text, span, filler),
            label=name,
            filler=filler,
            task=task,
            argument_id=arg.id,
            event_id=event.id,
        )
        for name, filler in labels
    ]
