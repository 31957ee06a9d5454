"""Brute-force reference implementations used as test oracles.

Nothing here imports the constraint engine or the scorer. Inputs are plain
lists and dicts so that the oracles can be checked against the package
without sharing code paths with it.
"""

import itertools
import random

from argprompt.corpus import ArgumentMention, Document, EventMention, Span
from argprompt.ontology import CountConstraint, CrossTaskConstraint, EventPairConstraint, ontology_from_dict


def ranked(scores, order):
    """Sort (label, score) pairs by score descending, ties by ``order``."""
    pos = {label: i for i, label in enumerate(order)}
    return sorted(scores, key=lambda p: (-p[1], pos[p[0]]))


def cross_task_loop(current, roles, ents, allowed, discarded=frozenset()):
    """Step-by-step demotion loop. Returns (final role, discarded set)."""
    score = dict(roles)
    role, disc, j = current, set(discarded), 0
    for _ in range(len(roles) + len(ents) + 1):
        etype, escore = ents[j]
        ok = allowed(role)
        if ok is None or etype in ok:
            return role, frozenset(disc)
        if score[role] < escore:
            disc.add(role)
            rest = [r for r, _ in roles if r not in disc]
            if not rest:
                return current, frozenset(discarded)
            role = rest[0]
        else:
            j += 1
            if j == len(ents):
                return current, frozenset(discarded)
    raise AssertionError("demotion loop did not terminate")


def cross_task_closed_form(current, roles, ents, allowed, discarded=frozenset()):
    """Final role without simulating the loop.

    Role scores only fall as roles are discarded and entity scores only
    fall as types are discarded, so whichever side loses the first
    comparison keeps losing. Either the role walks down its ranking with
    the top entity type fixed, or the role never changes.
    """
    top, top_score = ents[0]

    def fits(r):
        ok = allowed(r)
        return ok is None or top in ok

    if fits(current) or dict(roles)[current] >= top_score:
        return current
    for r, _ in roles:
        if r != current and r not in discarded and fits(r):
            return r
    return current


def count_oracle(holders_view, max_count):
    """``holders_view``: list of (role_score or None, alternatives) per argument,
    None when the argument does not hold the capped role. Returns the list of
    new roles (None = unchanged) picking the kept set by exhaustive search."""
    holders = [i for i, (s, _) in enumerate(holders_view) if s is not None]
    out = [None] * len(holders_view)
    if len(holders) <= max_count:
        return out
    best = max(
        itertools.combinations(holders, max_count),
        key=lambda c: (sum(holders_view[i][0] for i in c), [-i for i in c]),
    )
    for i in holders:
        if i not in best:
            alts = holders_view[i][1]
            out[i] = alts[0] if alts else None
    return out


def shared_pairs(doc, type_a, type_b):
    out = []
    for ea in doc.events:
        for eb in doc.events:
            if ea.id == eb.id or ea.event_type != type_a or eb.event_type != type_b:
                continue
            for aa in ea.arguments:
                for ab in eb.arguments:
                    if (aa.span.start, aa.span.end) == (ab.span.start, ab.span.end):
                        out.append((ea, eb, aa, ab))
    return out


def event_pair_fix(ra, sa, rb, sb, bindings, cands_a, cands_b):
    """Enumerate both candidate fixes and pick by the score rule.

    Returns ("a", role), ("b", role) or None when nothing changes.
    """
    if (ra, rb) in bindings:
        return None
    a_side = {a for a, _ in bindings}
    b_side = {b for _, b in bindings}
    if ra not in a_side and rb not in b_side:
        return None
    fixes = {
        "a": next((a for a, b in bindings if b == rb), None),
        "b": next((b for a, b in bindings if a == ra), None),
    }
    prefer = ["a", "b"] if sa < sb else ["b", "a"]
    for side in prefer:
        new = fixes[side]
        if new is not None and new in (cands_a if side == "a" else cands_b):
            return side, new
    return None


def regularize_oracle(doc, rankings, allowed, specs, order=("CrossTask", "Count", "EventPair")):
    """Run the three procedures over plain dicts.

    ``rankings`` maps (event_id, argument_id) to (eac, eaet) ranked pair
    lists; ``allowed(event_type, role)`` returns a set or None.
    """
    eac = {k: v[0] for k, v in rankings.items()}
    role = {k: v[0][0][0] for k, v in rankings.items()}
    disc = {k: frozenset() for k in rankings}
    etype_of = {ev.id: ev.event_type for ev in doc.events}

    def score(k, r):
        return dict(eac[k])[r]

    for kind in order:
        active = [s for s in specs if s.kind == kind]
        if kind == "CrossTask":
            for _ in active:
                for k, (roles, ents) in rankings.items():
                    et = etype_of[k[0]]
                    role[k], disc[k] = cross_task_loop(
                        role[k], roles, ents, lambda r, et=et: allowed(et, r), disc[k]
                    )
        elif kind == "Count":
            for spec in active:
                for ev in doc.events:
                    if spec.event_type not in ("ANY", ev.event_type):
                        continue
                    keys = [(ev.id, a.id) for a in ev.arguments]
                    view = []
                    for k in keys:
                        held = role[k] == spec.role
                        alts = [r for r, _ in eac[k] if r != spec.role and r not in disc[k]]
                        view.append((score(k, role[k]) if held else None, alts))
                    for k, new in zip(keys, count_oracle(view, spec.max_count)):
                        if new is not None:
                            role[k] = new
                            disc[k] = (disc[k] | {spec.role}) - {new}
        else:
            for spec in active:
                for ea, eb, aa, ab in shared_pairs(doc, spec.event_a, spec.event_b):
                    ka, kb = (ea.id, aa.id), (eb.id, ab.id)
                    fix = event_pair_fix(
                        role[ka], score(ka, role[ka]), role[kb], score(kb, role[kb]),
                        list(spec.bindings),
                        {r for r, _ in eac[ka]}, {r for r, _ in eac[kb]},
                    )
                    if fix is not None:
                        k = ka if fix[0] == "a" else kb
                        role[k] = fix[1]
                        disc[k] = disc[k] - {fix[1]}
    return role


# --- random instances -------------------------------------------------------

GRID = [-1.0, -1.5, -2.0, -2.5, -3.0, -3.5, -4.0]
SLOTS = [(0, 3), (4, 7), (8, 11), (12, 15)]
TEXT = "abc def ghi jkl mno"


def random_instance(rng: random.Random):
    """A small ontology, document, raw scores and constraint suite.

    At most 5 roles per event type, 4 entity types, 3 events and 4
    arguments per event. Scores come from a coarse grid so ties are common.
    """
    role_pool = [f"R{i}" for i in range(5)]
    etypes = [f"E{i}" for i in range(rng.randint(1, 4))]
    event_types = {}
    for name in ("A", "B"):
        roles = rng.sample(role_pool, rng.randint(1, 5))
        mapping = {}
        for r in roles:
            if rng.random() < 0.7:
                mapping[r] = rng.sample(etypes, rng.randint(1, len(etypes)))
        event_types[name] = (roles, mapping)
    ontology = ontology_from_dict(
        {
            "event_types": [
                {"name": n, "roles": [{"name": r} for r in roles], "role_entity_types": m}
                for n, (roles, m) in event_types.items()
            ],
            "entity_types": [{"name": e, "verbalization": e.lower()} for e in etypes],
        }
    )

    events, raw = [], {}
    for ei in range(rng.randint(1, 3)):
        et = rng.choice("AB")
        args = []
        for ai in range(rng.randint(1, 4)):
            s, e = rng.choice(SLOTS)
            args.append(ArgumentMention(f"a{ai}", Span(s, e, TEXT[s:e])))
            raw[(f"e{ei}", f"a{ai}")] = (
                [(r, rng.choice(GRID)) for r in event_types[et][0]],
                [(t, rng.choice(GRID)) for t in etypes],
            )
        events.append(EventMention(f"e{ei}", et, Span(16, 19, TEXT[16:19]), tuple(args)))
    doc = Document("rand", TEXT, tuple(events))

    specs = []
    if rng.random() < 0.8:
        specs.append(CrossTaskConstraint())
    for _ in range(rng.randint(0, 2)):
        scope = rng.choice(["ANY", "A", "B"])
        pool = event_types["A" if scope == "ANY" else scope][0]
        specs.append(CountConstraint(scope, rng.choice(pool), rng.randint(1, 2)))
    if rng.random() < 0.8:
        ra, rb = event_types["A"][0], event_types["B"][0]
        n = rng.randint(1, min(len(ra), len(rb), 3))
        specs.append(EventPairConstraint("A", "B", tuple(zip(rng.sample(ra, n), rng.sample(rb, n)))))
    return ontology, doc, raw, specs
