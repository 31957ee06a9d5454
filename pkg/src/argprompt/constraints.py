"""Global-constraint regularization of initial role predictions.

Three procedures rewrite the per-argument role assignment:

* cross-task: the predicted role must admit the predicted entity type;
  whichever of the two labels scores lower is discarded until they agree.
* count: at most ``max_count`` arguments of an event may hold a role; the
  surplus lower-scored holders fall back to their next-best role.
* event pair: an argument shared by two related events must hold bound
  roles in both; the lower-scored side is rewritten to the partner role.

Every label change is logged as a :class:`TraceRecord`. Replaying the role
records over the initial predictions reproduces the final assignment.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .corpus import Document, shared_arguments
from .ontology import (
    ConstraintSpec,
    CountConstraint,
    CrossTaskConstraint,
    EventPairConstraint,
    Ontology,
)
from .scoring import ScoredLabel, rank

__all__ = [
    "ArgumentState",
    "DEFAULT_ORDER",
    "KINDS",
    "RegularizationResult",
    "TraceRecord",
    "apply_count_constraint",
    "apply_cross_task",
    "apply_event_pair_constraint",
    "initial_state",
    "parse_order",
    "regularize",
    "replay_trace",
]

KINDS = ("CrossTask", "Count", "EventPair")
DEFAULT_ORDER = KINDS
_ORDER_ALIASES = {
    "cross-task": "CrossTask",
    "crosstask": "CrossTask",
    "count": "Count",
    "cross-argument": "Count",
    "event-pair": "EventPair",
    "eventpair": "EventPair",
    "cross-event": "EventPair",
}

StateKey = tuple[str, str]  # (event_id, argument_id)


@dataclass(frozen=True)
class ArgumentState:
    argument_id: str
    event_id: str
    eac_ranking: tuple[ScoredLabel, ...]
    eaet_ranking: tuple[ScoredLabel, ...] | None
    current_role: str
    current_role_score: float
    discarded_roles: frozenset[str] = frozenset()

    @property
    def key(self) -> StateKey:
        return (self.event_id, self.argument_id)

    @property
    def initial_role(self) -> str:
        return self.eac_ranking[0].label

    def role_score(self, role: str) -> float:
        for s in self.eac_ranking:
            if s.label == role:
                return s.score
        raise KeyError(role)

    def has_role(self, role: str) -> bool:
        return any(s.label == role for s in self.eac_ranking)

    def best_available(self, exclude: Iterable[str] = ()) -> ScoredLabel | None:
        banned = self.discarded_roles | set(exclude)
        for s in self.eac_ranking:
            if s.label not in banned:
                return s
        return None

    def with_role(self, role: str, discarded: Iterable[str] | None = None) -> "ArgumentState":
        discarded = self.discarded_roles if discarded is None else frozenset(discarded)
        return dataclasses.replace(
            self,
            current_role=role,
            current_role_score=self.role_score(role),
            discarded_roles=frozenset(discarded) - {role},
        )


def initial_state(
    argument_id: str,
    event_id: str,
    eac_scores: Sequence[ScoredLabel],
    eaet_scores: Sequence[ScoredLabel] | None = None,
    role_order: Sequence[str] | None = None,
    entity_order: Sequence[str] | None = None,
) -> ArgumentState:
    """Rank the raw candidate scores and take the best role as the prediction."""
    eac = tuple(rank(eac_scores, role_order))
    eaet = tuple(rank(eaet_scores, entity_order)) if eaet_scores else None
    return ArgumentState(argument_id, event_id, eac, eaet, eac[0].label, eac[0].score)


@dataclass(frozen=True)
class TraceRecord:
    kind: str
    event_id: str
    argument_id: str
    field: str  # "role" or "entity_type"
    before: str | None
    after: str | None
    reason: str
    scores: dict = dataclasses.field(default_factory=dict)
    doc_id: str | None = None

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "event_id": self.event_id,
            "argument_id": self.argument_id,
            "field": self.field,
            "before": self.before,
            "after": self.after,
            "reason": self.reason,
            "scores": self.scores,
        }
        if self.doc_id is not None:
            out = {"doc_id": self.doc_id, **out}
        return out


def apply_cross_task(
    state: ArgumentState, event_type: str, ontology: Ontology
) -> tuple[ArgumentState, list[TraceRecord]]:
    """Demote the role or the entity type until the two are admissible together.

    A role without an entity-type mapping is consistent with anything. If
    either ranking runs out, the state on entry is restored.
    """
    if state.eaet_ranking is None:
        raise ValueError(f"argument {state.argument_id!r} has no entity-type ranking")
    records: list[TraceRecord] = []

    def log(field, before, after, reason, **scores):
        records.append(
            TraceRecord("CrossTask", state.event_id, state.argument_id, field, before, after, reason, scores)
        )

    current = state
    entities = state.eaet_ranking
    ei = 0
    while True:
        etype = entities[ei]
        role = current.current_role
        allowed = ontology.allowed(event_type, role)
        if allowed is None or etype.label in allowed:
            return current, records
        if current.current_role_score < etype.score:
            nxt = current.best_available(exclude=[role])
            if nxt is None:
                break
            log(
                "role",
                role,
                nxt.label,
                f"{event_type}.{role} does not admit {etype.label}; role scores lower",
                **{role: current.current_role_score, etype.label: etype.score},
            )
            current = current.with_role(nxt.label, current.discarded_roles | {role})
        else:
            ei += 1
            after = entities[ei].label if ei < len(entities) else None
            log(
                "entity_type",
                etype.label,
                after,
                f"{event_type}.{role} does not admit {etype.label}; entity type scores lower",
                **{role: current.current_role_score, etype.label: etype.score},
            )
            if after is None:
                break
    log("role", current.current_role, state.current_role, "candidates exhausted; prediction restored")
    return state, records


def apply_count_constraint(
    event_states: Sequence[ArgumentState], spec: CountConstraint, event_type: str | None = None
) -> tuple[list[ArgumentState], list[TraceRecord]]:
    """Cap how many arguments of one event hold ``spec.role``.

    ``event_states`` are the states of one event's arguments in argument
    order, which breaks score ties. The ``max_count`` best-scored holders
    keep the role; the others move to their best remaining candidate in a
    single pass.
    """
    states = list(event_states)
    if event_type is not None and not spec.applies_to(event_type):
        return states, []
    holders = [i for i, s in enumerate(states) if s.current_role == spec.role]
    if len(holders) <= spec.max_count:
        return states, []
    ordered = sorted(holders, key=lambda i: (-states[i].current_role_score, i))
    kept = ordered[: spec.max_count]
    records = []
    for i in sorted(ordered[spec.max_count :]):
        s = states[i]
        scores = {"kept": {states[k].argument_id: states[k].current_role_score for k in kept}}
        scores[s.argument_id] = s.current_role_score
        alt = s.best_available(exclude=[spec.role])
        if alt is None:
            records.append(
                TraceRecord("Count", s.event_id, s.argument_id, "role", spec.role, spec.role,
                            f"unresolvable: no alternative to {spec.role}", scores)
            )
            continue
        scores[alt.label] = alt.score
        records.append(
            TraceRecord(
                "Count", s.event_id, s.argument_id, "role", spec.role, alt.label,
                f"more than {spec.max_count} {spec.role} argument(s); lower-scored holder demoted",
                scores,
            )
        )
        states[i] = s.with_role(alt.label, s.discarded_roles | {spec.role})
    return states, records


def apply_event_pair_constraint(
    doc_states: Mapping[StateKey, ArgumentState], doc: Document, spec: EventPairConstraint
) -> tuple[dict[StateKey, ArgumentState], list[TraceRecord]]:
    """Make every argument shared by an ``event_a``/``event_b`` pair hold bound roles.

    Role pairs the bindings do not mention on either side are left alone.
    Otherwise the lower-scored side (``b`` on ties) takes the partner of
    the other side's role; when that partner is undefined or not a
    candidate of the argument, the other side is rewritten instead.
    """
    states = dict(doc_states)
    a_to_b, b_to_a = spec.a_to_b, spec.b_to_a
    bindings = set(spec.bindings)
    records = []
    for ev_a, ev_b, arg_a, arg_b in shared_arguments(doc, spec.event_a, spec.event_b):
        ka, kb = (ev_a.id, arg_a.id), (ev_b.id, arg_b.id)
        sa, sb = states[ka], states[kb]
        ra, rb = sa.current_role, sb.current_role
        if (ra, rb) in bindings or (ra not in a_to_b and rb not in b_to_a):
            continue
        fix_a = (ka, sa, b_to_a.get(rb))
        fix_b = (kb, sb, a_to_b.get(ra))
        attempts = (fix_a, fix_b) if sa.current_role_score < sb.current_role_score else (fix_b, fix_a)
        scores = {
            f"{spec.event_a}.{ra}": sa.current_role_score,
            f"{spec.event_b}.{rb}": sb.current_role_score,
        }
        for key, s, new_role in attempts:
            if new_role is None or not s.has_role(new_role):
                continue
            records.append(
                TraceRecord(
                    "EventPair", s.event_id, s.argument_id, "role", s.current_role, new_role,
                    f"shared by {ev_a.id} ({spec.event_a}) and {ev_b.id} ({spec.event_b}); "
                    f"({ra}, {rb}) is not a bound pair",
                    scores,
                )
            )
            states[key] = s.with_role(new_role)
            break
        else:
            records.append(
                TraceRecord("EventPair", sb.event_id, sb.argument_id, "role", rb, rb,
                            f"unresolvable: ({ra}, {rb}) has no candidate fix", scores)
            )
    return states, records


@dataclass
class RegularizationResult:
    states: dict[StateKey, ArgumentState]
    trace: list[TraceRecord]

    def assignments(self) -> dict[StateKey, str]:
        return {k: s.current_role for k, s in self.states.items()}


def parse_order(order: str | Sequence[str] | None) -> tuple[str, ...]:
    """Normalize a kind order such as ``"count,cross-task,event-pair"``."""
    if order is None:
        return DEFAULT_ORDER
    if isinstance(order, str):
        order = [part.strip() for part in order.split(",") if part.strip()]
    kinds = []
    for item in order:
        kind = item if item in KINDS else _ORDER_ALIASES.get(item.lower())
        if kind is None:
            raise ValueError(f"unknown constraint kind {item!r}")
        if kind in kinds:
            raise ValueError(f"constraint kind {kind!r} listed twice")
        kinds.append(kind)
    return tuple(kinds)


def _count_pass(states, doc, specs, records):
    changed = False
    for spec in specs:
        for ev in doc.events:
            if not spec.applies_to(ev.event_type):
                continue
            keys = [(ev.id, a.id) for a in ev.arguments]
            new, recs = apply_count_constraint([states[k] for k in keys], spec, ev.event_type)
            for k, s in zip(keys, new):
                changed |= s.current_role != states[k].current_role
                states[k] = s
            records.extend(recs)
    return changed


def regularize(
    doc: Document,
    states: Mapping[StateKey, ArgumentState],
    specs: Sequence[ConstraintSpec],
    ontology: Ontology,
    order: str | Sequence[str] | None = None,
    *,
    count_fixpoint: bool = False,
) -> RegularizationResult:
    """Apply constraint kinds in ``order`` (default cross-task, count,
    event pair), each kind's specs in the given order, each spec once.

    ``count_fixpoint`` re-runs the count specs until no role changes.
    """
    states = dict(states)
    records: list[TraceRecord] = []
    by_kind = {k: [s for s in specs if s.kind == k] for k in KINDS}
    for kind in parse_order(order):
        active = by_kind[kind]
        if not active:
            continue
        if kind == "CrossTask":
            for _ in active:
                for ev in doc.events:
                    for arg in ev.arguments:
                        key = (ev.id, arg.id)
                        states[key], recs = apply_cross_task(states[key], ev.event_type, ontology)
                        records.extend(recs)
        elif kind == "Count":
            while _count_pass(states, doc, active, records) and count_fixpoint:
                pass
        else:
            for spec in active:
                states, recs = apply_event_pair_constraint(states, doc, spec)
                records.extend(recs)
    return RegularizationResult(states, [dataclasses.replace(r, doc_id=doc.doc_id) for r in records])


def replay_trace(initial: Mapping[StateKey, str], trace: Iterable[TraceRecord]) -> dict[StateKey, str]:
    """Apply the role changes of ``trace`` to ``initial`` assignments.

    Raises ``ValueError`` if a record's ``before`` disagrees with the
    replayed state, i.e. the trace is unsound.
    """
    current = dict(initial)
    for rec in trace:
        if rec.field != "role":
            continue
        key = (rec.event_id, rec.argument_id)
        if current[key] != rec.before:
            raise ValueError(
                f"trace out of sync at {key}: expected {rec.before!r}, found {current[key]!r}"
            )
        current[key] = rec.after
    return current
