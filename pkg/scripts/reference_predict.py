"""Straight-line reference run used to freeze the golden prediction file.

Deliberately shares no code with the argprompt package: prompts, ranking
and the three constraint procedures are re-derived here from plain JSON.

    python scripts/reference_predict.py CORPUS ONTOLOGY CONSTRAINTS TABLE OUT
"""

import json
import re
import sys


def verbal(entry):
    return entry.get("verbalization") or re.sub(r"[-_]", " ", entry["name"].lower())


def main(corpus_path, ontology_path, constraints_path, table_path, out_path):
    ontology = json.load(open(ontology_path, encoding="utf-8"))
    table = json.load(open(table_path, encoding="utf-8"))
    specs = json.load(open(constraints_path, encoding="utf-8")) if constraints_path != "-" else []

    roles = {}
    allowed = {}
    for ev in ontology["event_types"]:
        roles[ev["name"]] = [(r["name"], verbal(r)) for r in ev["roles"]]
        for role, types in (ev.get("role_entity_types") or {}).items():
            allowed[(ev["name"], role)] = set(types)
    etypes = [(e["name"], verbal(e)) for e in ontology["entity_types"]]
    cross_task = [s for s in specs if s["kind"] == "CrossTask"]
    counts = [s for s in specs if s["kind"] == "Count"]
    pairs = [s for s in specs if s["kind"] == "EventPair"]

    out = open(out_path, "w", encoding="utf-8")
    for line in open(corpus_path, encoding="utf-8"):
        if not line.strip():
            continue
        doc = json.loads(line)
        text = doc["text"]

        def ranking(ev, arg, labels):
            prefix = (
                f'This is a {ev["event_type"]} event whose occurrence is most clearly '
                f'expressed by "{ev["trigger"]["text"]}."'
            )
            scored = []
            for idx, (name, word) in enumerate(labels):
                passage = (
                    prefix + " " + text[: arg["end"]] + " and any other " + word + text[arg["end"] :]
                )
                scored.append((-table[passage], idx, name, table[passage]))
            scored.sort()
            return [(name, score) for _, _, name, score in scored]

        state = {}
        for ev in doc["events"]:
            for arg in ev["arguments"]:
                eac = ranking(ev, arg, roles[ev["event_type"]])
                eaet = ranking(ev, arg, etypes) if cross_task else None
                state[(ev["id"], arg["id"])] = {
                    "eac": eac,
                    "eaet": eaet,
                    "role": eac[0][0],
                    "initial": eac[0][0],
                    "discarded": set(),
                }

        def score_of(st, role):
            return dict(st["eac"])[role]

        # cross-task
        for _ in cross_task:
            for ev in doc["events"]:
                for arg in ev["arguments"]:
                    st = state[(ev["id"], arg["id"])]
                    saved_role, saved_disc = st["role"], set(st["discarded"])
                    ents = st["eaet"]
                    ei = 0
                    exhausted = False
                    while True:
                        ok = allowed.get((ev["event_type"], st["role"]))
                        if ok is None or ents[ei][0] in ok:
                            break
                        if score_of(st, st["role"]) < ents[ei][1]:
                            st["discarded"].add(st["role"])
                            rest = [r for r, _ in st["eac"] if r not in st["discarded"]]
                            if not rest:
                                exhausted = True
                                break
                            st["role"] = rest[0]
                        else:
                            ei += 1
                            if ei == len(ents):
                                exhausted = True
                                break
                    if exhausted:
                        st["role"], st["discarded"] = saved_role, saved_disc

        # count
        for spec in counts:
            for ev in doc["events"]:
                if spec["event"] != "ANY" and spec["event"] != ev["event_type"]:
                    continue
                keyed = [(i, state[(ev["id"], a["id"])]) for i, a in enumerate(ev["arguments"])]
                holders = [(i, st) for i, st in keyed if st["role"] == spec["role"]]
                if len(holders) <= spec["max"]:
                    continue
                holders.sort(key=lambda p: (-score_of(p[1], p[1]["role"]), p[0]))
                for _, st in holders[spec["max"] :]:
                    alts = [
                        r for r, _ in st["eac"] if r != spec["role"] and r not in st["discarded"]
                    ]
                    if alts:
                        st["discarded"].add(spec["role"])
                        st["role"] = alts[0]

        # event pair
        for spec in pairs:
            bind = [tuple(b) for b in spec["bindings"]]
            a2b = dict(bind)
            b2a = {b: a for a, b in bind}
            evs = doc["events"]
            for ea in evs:
                if ea["event_type"] != spec["a"]:
                    continue
                for eb in evs:
                    if eb["id"] == ea["id"] or eb["event_type"] != spec["b"]:
                        continue
                    for aa in ea["arguments"]:
                        for ab in eb["arguments"]:
                            if (aa["start"], aa["end"]) != (ab["start"], ab["end"]):
                                continue
                            sa = state[(ea["id"], aa["id"])]
                            sb = state[(eb["id"], ab["id"])]
                            ra, rb = sa["role"], sb["role"]
                            if (ra, rb) in bind or (ra not in a2b and rb not in b2a):
                                continue
                            opt_a = (sa, b2a.get(rb))
                            opt_b = (sb, a2b.get(ra))
                            if score_of(sa, ra) < score_of(sb, rb):
                                options = [opt_a, opt_b]
                            else:
                                options = [opt_b, opt_a]
                            for st, new in options:
                                if new is not None and new in dict(st["eac"]):
                                    st["role"] = new
                                    st["discarded"].discard(new)
                                    break

        for ev in doc["events"]:
            for arg in ev["arguments"]:
                st = state[(ev["id"], arg["id"])]
                rec = {
                    "doc_id": doc["doc_id"],
                    "event_id": ev["id"],
                    "argument_id": arg["id"],
                    "role": st["role"],
                    "score": score_of(st, st["role"]),
                    "initial_role": st["initial"],
                }
                out.write(json.dumps(rec, ensure_ascii=False) + "\n")
    out.close()


if __name__ == "__main__":
    main(*sys.argv[1:6])
