"""Event ontology and declarative global-constraint definitions.

The ontology file is JSON::

    {"event_types": [{"name": "Attack", "full_name": "Conflict:Attack",
                      "roles": [{"name": "Attacker"}, ...],
                      "role_entity_types": {"Attacker": ["PER", "ORG", "GPE"]}}],
     "entity_types": [{"name": "PER", "verbalization": "person"}, ...]}

The constraint file is a JSON array of tagged objects, see :func:`load_constraints`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

__all__ = [
    "ANY",
    "ConstraintError",
    "CountConstraint",
    "CrossTaskConstraint",
    "EntityType",
    "EventPairConstraint",
    "EventType",
    "Ontology",
    "OntologyError",
    "Role",
    "default_verbalization",
    "dump_ontology",
    "load_constraints",
    "load_ontology",
    "ontology_from_dict",
    "ontology_to_dict",
    "parse_constraints",
    "verbalize",
]

ANY = "ANY"


class OntologyError(ValueError):
    """Raised when an ontology file cannot be parsed or fails validation."""


class ConstraintError(ValueError):
    """Raised when a constraint definition is malformed or names unknown labels."""


def default_verbalization(name: str) -> str:
    """Lowercase ``name`` and turn every '-' or '_' into a space."""
    return re.sub(r"[-_]", " ", name.lower())


@dataclass(frozen=True)
class EventType:
    name: str
    full_name: str | None = None


@dataclass(frozen=True)
class Role:
    name: str
    verbalization: str

    def __post_init__(self):
        if not self.verbalization:
            raise OntologyError(f"role {self.name!r} has an empty verbalization")
        if self.verbalization != self.verbalization.lower():
            raise OntologyError(
                f"role {self.name!r} verbalization {self.verbalization!r} must be lowercase"
            )


@dataclass(frozen=True)
class EntityType:
    name: str
    verbalization: str


Label = Union[Role, EntityType]


@dataclass(frozen=True, eq=True)
class Ontology:
    """Event types, their ordered role sets, and role/entity-type admissibility.

    Role order within an event is file order and is the tie-break order used
    everywhere downstream.
    """

    event_types: dict[str, EventType]
    roles_by_event: dict[str, tuple[Role, ...]]
    allowed_entity_types: dict[tuple[str, str], frozenset[str]]
    entity_types: tuple[EntityType, ...]
    _entity_index: dict[str, EntityType] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self):
        object.__setattr__(self, "_entity_index", {e.name: e for e in self.entity_types})
        self._validate()

    def _validate(self):
        if not self.event_types:
            raise OntologyError("ontology defines no event types")
        if len(self._entity_index) != len(self.entity_types):
            seen = [e.name for e in self.entity_types]
            dupes = sorted({n for n in seen if seen.count(n) > 1})
            raise OntologyError(f"duplicate entity type names {dupes}")
        for name in self.event_types:
            roles = self.roles_by_event.get(name)
            if not roles:
                raise OntologyError(f"event type {name!r} has no roles")
            names = [r.name for r in roles]
            if len(set(names)) != len(names):
                raise OntologyError(f"event type {name!r} lists a role twice")
        for (event, role), etypes in self.allowed_entity_types.items():
            if event not in self.event_types:
                raise OntologyError(f"entity-type mapping for unknown event type {event!r}")
            if role not in self.role_names(event):
                raise OntologyError(
                    f"entity-type mapping for role {role!r} not defined on event {event!r}"
                )
            if not etypes:
                raise OntologyError(f"empty entity-type set for ({event}, {role})")
            unknown = sorted(set(etypes) - set(self._entity_index))
            if unknown:
                raise OntologyError(
                    f"({event}, {role}) references unknown entity types {unknown}"
                )

    def role_names(self, event_type: str) -> list[str]:
        return [r.name for r in self.roles_by_event[event_type]]

    def role(self, event_type: str, name: str) -> Role:
        for r in self.roles_by_event[event_type]:
            if r.name == name:
                return r
        raise KeyError(f"{event_type}.{name}")

    def entity_type(self, name: str) -> EntityType:
        return self._entity_index[name]

    def entity_type_names(self) -> list[str]:
        return [e.name for e in self.entity_types]

    def allowed(self, event_type: str, role: str) -> frozenset[str] | None:
        """Admissible entity types for a role, or None when unconstrained."""
        return self.allowed_entity_types.get((event_type, role))

    def all_role_names(self) -> set[str]:
        return {r.name for roles in self.roles_by_event.values() for r in roles}

    def reachable_entity_types(self) -> list[str]:
        """Entity types admissible for at least one role, in ontology order."""
        reachable = set().union(*self.allowed_entity_types.values()) if self.allowed_entity_types else set()
        return [e.name for e in self.entity_types if e.name in reachable]


def verbalize(label: Label) -> str:
    return label.verbalization


def ontology_from_dict(data: dict) -> Ontology:
    if not isinstance(data, dict):
        raise OntologyError("ontology root must be a JSON object")
    entity_types = []
    for i, entry in enumerate(data.get("entity_types", [])):
        try:
            name = entry["name"]
        except (KeyError, TypeError):
            raise OntologyError(f"entity_types[{i}] lacks a name") from None
        entity_types.append(
            EntityType(name, entry.get("verbalization") or default_verbalization(name))
        )

    event_types: dict[str, EventType] = {}
    roles_by_event: dict[str, tuple[Role, ...]] = {}
    allowed: dict[tuple[str, str], frozenset[str]] = {}
    for i, entry in enumerate(data.get("event_types", [])):
        if not isinstance(entry, dict) or not entry.get("name"):
            raise OntologyError(f"event_types[{i}] lacks a name")
        name = entry["name"]
        if name in event_types:
            raise OntologyError(f"duplicate event type {name!r}")
        event_types[name] = EventType(name, entry.get("full_name"))
        roles = []
        for j, r in enumerate(entry.get("roles", [])):
            if isinstance(r, str):
                r = {"name": r}
            if not r.get("name"):
                raise OntologyError(f"event type {name!r} roles[{j}] lacks a name")
            roles.append(Role(r["name"], r.get("verbalization") or default_verbalization(r["name"])))
        roles_by_event[name] = tuple(roles)
        for role, etypes in (entry.get("role_entity_types") or {}).items():
            allowed[(name, role)] = frozenset(etypes)
    return Ontology(event_types, roles_by_event, allowed, tuple(entity_types))


def ontology_to_dict(ontology: Ontology) -> dict:
    order = {e.name: i for i, e in enumerate(ontology.entity_types)}
    events = []
    for name, et in ontology.event_types.items():
        entry: dict = {"name": name}
        if et.full_name is not None:
            entry["full_name"] = et.full_name
        entry["roles"] = [
            {"name": r.name, "verbalization": r.verbalization} for r in ontology.roles_by_event[name]
        ]
        mapping = {
            r.name: sorted(ontology.allowed_entity_types[(name, r.name)], key=order.__getitem__)
            for r in ontology.roles_by_event[name]
            if (name, r.name) in ontology.allowed_entity_types
        }
        if mapping:
            entry["role_entity_types"] = mapping
        events.append(entry)
    return {
        "event_types": events,
        "entity_types": [
            {"name": e.name, "verbalization": e.verbalization} for e in ontology.entity_types
        ],
    }


def _read_json(path, error_cls):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise error_cls(f"{path}: invalid JSON ({exc})") from exc


def load_ontology(path: str | Path) -> Ontology:
    return ontology_from_dict(_read_json(path, OntologyError))


def dump_ontology(ontology: Ontology, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(ontology_to_dict(ontology), fh, indent=2, ensure_ascii=False)
        fh.write("\n")


# -- constraints -------------------------------------------------------------


@dataclass(frozen=True)
class CrossTaskConstraint:
    """Predicted role and predicted entity type must be admissible together."""

    kind = "CrossTask"

    def to_dict(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class CountConstraint:
    """At most ``max_count`` arguments of an event hold ``role``.

    ``event_type`` is :data:`ANY` when the cap applies to every event.
    """

    event_type: str
    role: str
    max_count: int = 1
    kind = "Count"

    def applies_to(self, event_type: str) -> bool:
        return self.event_type == ANY or self.event_type == event_type

    def to_dict(self) -> dict:
        return {"kind": self.kind, "event": self.event_type, "role": self.role, "max": self.max_count}


@dataclass(frozen=True)
class EventPairConstraint:
    """Arguments shared by an ``event_a`` and an ``event_b`` mention must
    hold one of the bound role pairs ``(role in a, role in b)``."""

    event_a: str
    event_b: str
    bindings: tuple[tuple[str, str], ...]
    kind = "EventPair"

    @property
    def a_to_b(self) -> dict[str, str]:
        return {a: b for a, b in self.bindings}

    @property
    def b_to_a(self) -> dict[str, str]:
        return {b: a for a, b in self.bindings}

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "a": self.event_a,
            "b": self.event_b,
            "bindings": [list(pair) for pair in self.bindings],
        }


ConstraintSpec = Union[CrossTaskConstraint, CountConstraint, EventPairConstraint]


def _check_event(ontology: Ontology, name, where: str) -> str:
    if not isinstance(name, str) or name not in ontology.event_types:
        raise ConstraintError(f"{where}: unknown event type {name!r}")
    return name


def _parse_one(entry, i: int, ontology: Ontology) -> ConstraintSpec:
    where = f"constraint[{i}]"
    if not isinstance(entry, dict):
        raise ConstraintError(f"{where}: expected an object")
    kind = entry.get("kind")
    if kind == "CrossTask":
        return CrossTaskConstraint()
    if kind == "Count":
        event = entry.get("event", ANY)
        role = entry.get("role")
        max_count = entry.get("max", 1)
        if not isinstance(max_count, int) or isinstance(max_count, bool) or max_count < 1:
            raise ConstraintError(f"{where}: max must be a positive integer, got {max_count!r}")
        if event == ANY:
            if role not in ontology.all_role_names():
                raise ConstraintError(f"{where}: unknown role {role!r}, not defined on any event type")
        else:
            _check_event(ontology, event, where)
            if role not in ontology.role_names(event):
                raise ConstraintError(f"{where}: unknown role {role!r} for {event!r}")
        return CountConstraint(event, role, max_count)
    if kind == "EventPair":
        a = _check_event(ontology, entry.get("a"), where)
        b = _check_event(ontology, entry.get("b"), where)
        raw = entry.get("bindings")
        if not isinstance(raw, list) or not raw:
            raise ConstraintError(f"{where}: bindings must be a non-empty list")
        bindings = []
        for pair in raw:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ConstraintError(f"{where}: malformed binding {pair!r}")
            ra, rb = pair
            if ra not in ontology.role_names(a):
                raise ConstraintError(f"{where}: unknown role {ra!r} for {a!r}")
            if rb not in ontology.role_names(b):
                raise ConstraintError(f"{where}: unknown role {rb!r} for {b!r}")
            bindings.append((ra, rb))
        if len({ra for ra, _ in bindings}) != len(bindings) or len(
            {rb for _, rb in bindings}
        ) != len(bindings):
            raise ConstraintError(f"{where}: a role is bound more than once")
        return EventPairConstraint(a, b, tuple(bindings))
    raise ConstraintError(f"{where}: unknown constraint kind {kind!r}")


def parse_constraints(entries: Iterable, ontology: Ontology) -> list[ConstraintSpec]:
    """Validate raw constraint entries against ``ontology``, keeping their order."""
    if not isinstance(entries, list):
        raise ConstraintError("constraint file root must be a JSON array")
    return [_parse_one(entry, i, ontology) for i, entry in enumerate(entries)]


def load_constraints(path: str | Path, ontology: Ontology) -> list[ConstraintSpec]:
    """Load a constraint file.

    Entries look like ``{"kind": "Count", "event": "End-Position", "role":
    "Position", "max": 1}``, ``{"kind": "EventPair", "a": "Injure", "b":
    "Attack", "bindings": [["Victim", "Target"], ...]}`` or ``{"kind":
    "CrossTask"}``. File order is application order within a kind.
    """
    return parse_constraints(_read_json(path, ConstraintError), ontology)
