"""Regenerate src/argprompt/data/synthetic_corpus.jsonl.

Documents are written with inline span markup, ``[surface|key]``; events
refer to spans by key. Gold annotations satisfy every bundled constraint.
"""

import json
import re
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "src" / "argprompt" / "data" / "synthetic_corpus.jsonl"
ONTOLOGY = ROOT / "src" / "argprompt" / "data" / "ace_ontology.json"

MARK = re.compile(r"\[([^|\]]+)\|(\w+)\]")


def render(markup):
    text, spans, pos = [], {}, 0
    last = 0
    for m in MARK.finditer(markup):
        text.append(markup[last : m.start()])
        pos += m.start() - last
        surface, key = m.group(1), m.group(2)
        spans[key] = (pos, pos + len(surface), surface)
        text.append(surface)
        pos += len(surface)
        last = m.end()
    text.append(markup[last:])
    return "".join(text), spans


def make_doc(doc_id, markup, events):
    text, spans = render(markup)
    out_events = []
    for ei, (etype, trig, args) in enumerate(events, 1):
        s, e, t = spans[trig]
        out_args = []
        for ai, (key, role, ent) in enumerate(args, 1):
            a_s, a_e, a_t = spans[key]
            arg = {"id": f"a{ai}", "start": a_s, "end": a_e, "text": a_t, "gold_role": role}
            if ent:
                arg["gold_entity_type"] = ent
            out_args.append(arg)
        out_events.append(
            {"id": f"e{ei}", "event_type": etype, "trigger": {"start": s, "end": e, "text": t},
             "arguments": out_args}
        )
    return {"doc_id": doc_id, "text": text, "events": out_events}


def attack(f):
    return (
        f"In [{f[0]}|p], a [{f[1]}|w] was [{f[2]}|t] at [{f[3]}|tg].",
        [("Attack", "t", [("p", "Place", f[4]), ("w", "Instrument", "WEA"), ("tg", "Target", "PER")])],
    )


ATTACK = [
    ("Baghdad", "bomb", "fired", "17 people", "GPE"),
    ("Kandahar", "rocket", "launched", "a police patrol", "GPE"),
    ("the market", "grenade", "thrown", "shoppers", "FAC"),
    ("Mogadishu", "mortar shell", "fired", "civilians", "GPE"),
    ("the valley", "missile", "fired", "the villagers", "LOC"),
]


def attack_injure(f):
    return (
        f"[{f[0]}|a] [attacked|t1] a [{f[1]}|tg] in [{f[2]}|p] on [{f[3]}|tm], "
        f"[wounding|t2] [{f[4]}|v] with [{f[5]}|w].",
        [
            ("Attack", "t1", [("a", "Attacker", f[6]), ("tg", "Target", f[7]), ("p", "Place", "GPE"),
                              ("tm", "Time", None), ("v", "Target", "PER"), ("w", "Instrument", "WEA")]),
            ("Injure", "t2", [("a", "Agent", f[6]), ("v", "Victim", "PER"), ("p", "Place", "GPE"),
                              ("tm", "Time", None), ("w", "Instrument", "WEA")]),
        ],
    )


ATTACK_INJURE = [
    ("Militants", "convoy", "Mosul", "Monday", "three soldiers", "grenades", "ORG", "VEH"),
    ("Rebels", "checkpoint", "Homs", "Sunday", "two guards", "rifles", "ORG", "FAC"),
    ("A gunman", "bus", "Karachi", "Friday", "five passengers", "a pistol", "PER", "VEH"),
    ("Insurgents", "police station", "Kirkuk", "Tuesday", "four officers", "mortars", "ORG", "FAC"),
    ("Pirates", "tanker", "Aden", "Thursday", "the crew", "machine guns", "ORG", "VEH"),
]


def die_attack(f):
    return (
        f"[{f[0]}|a] [bombed|t1] [{f[1]}|tg] in [{f[2]}|p] on [{f[3]}|tm], [killing|t2] [{f[4]}|v].",
        [
            ("Attack", "t1", [("a", "Attacker", f[5]), ("tg", "Target", "FAC"), ("p", "Place", "GPE"),
                              ("tm", "Time", None), ("v", "Target", "PER")]),
            ("Die", "t2", [("a", "Agent", f[5]), ("v", "Victim", "PER"), ("p", "Place", "GPE"),
                           ("tm", "Time", None)]),
        ],
    )


DIE_ATTACK = [
    ("Warplanes", "a hospital", "Aleppo", "Saturday", "twelve patients", "ORG"),
    ("The air force", "a bridge", "Belgrade", "Wednesday", "six workers", "ORG"),
    ("Guerrillas", "a hotel", "Colombo", "Monday", "nine guests", "ORG"),
    ("A suicide bomber", "a mosque", "Quetta", "Friday", "30 worshippers", "PER"),
    ("Jets", "an airport", "Kabul", "Tuesday", "two pilots", "ORG"),
]


def end_position(f):
    return (
        f"[{f[0]}|pe] [resigned|t] as [{f[1]}|pos] of [{f[2]}|o] on [{f[3]}|tm].",
        [("End-Position", "t", [("pe", "Person", "PER"), ("pos", "Position", None),
                                ("o", "Entity", f[4]), ("tm", "Time", None)])],
    )


END_POSITION = [
    ("John Smith", "chairman", "Acme Corp", "Friday", "ORG"),
    ("Maria Lopez", "finance minister", "Spain", "Monday", "GPE"),
    ("Kenji Sato", "chief executive", "Nippon Steel", "Tuesday", "ORG"),
    ("Anna Berg", "coach", "the national team", "Sunday", "ORG"),
    ("Paul Martin", "ambassador", "Canada", "Thursday", "GPE"),
]


def start_end(f):
    return (
        f"[{f[0]}|pe] [left|t1] [{f[1]}|o1] to [join|t2] [{f[2]}|o2] as [{f[3]}|pos] in [{f[4]}|c].",
        [
            ("End-Position", "t1", [("pe", "Person", "PER"), ("o1", "Entity", "ORG")]),
            ("Start-Position", "t2", [("pe", "Person", "PER"), ("o2", "Entity", "ORG"),
                                      ("pos", "Position", None), ("c", "Place", "GPE")]),
        ],
    )


START_END = [
    ("Sarah Chen", "Google", "Apple", "vice president", "Cupertino"),
    ("Omar Haddad", "Reuters", "the BBC", "editor", "London"),
    ("Lena Fischer", "Siemens", "Bosch", "engineer", "Stuttgart"),
    ("Raj Patel", "Infosys", "Wipro", "director", "Bangalore"),
    ("Tom Baker", "Ford", "Tesla", "designer", "Austin"),
]


def arrest_charge(f):
    return (
        f"[{f[0]}|pe], [arrested|t1] by [{f[1]}|ag] in [{f[2]}|c] last week, "
        f"was [charged|t2] with [{f[3]}|cr].",
        [
            ("Arrest-Jail", "t1", [("pe", "Person", "PER"), ("ag", "Agent", "ORG"),
                                   ("c", "Place", "GPE"), ("cr", "Crime", None)]),
            ("Charge-Indict", "t2", [("pe", "Defendant", "PER"), ("cr", "Crime", None)]),
        ],
    )


ARREST_CHARGE = [
    ("Pierre Duval", "police", "Lyon", "fraud"),
    ("Ivan Petrov", "federal agents", "Miami", "smuggling"),
    ("Li Wei", "customs officers", "Shanghai", "bribery"),
    ("Carlos Mendes", "the FBI", "Boston", "money laundering"),
    ("Hans Weber", "Interpol", "Vienna", "murder"),
]


def transport(f):
    return (
        f"[{f[0]}|ag] [moved|t] [{f[1]}|ar] from [{f[2]}|o] to [{f[3]}|d] by [{f[4]}|v] on [{f[5]}|tm].",
        [("Transport", "t", [("ag", "Agent", f[6]), ("ar", "Artifact", f[7]), ("o", "Origin", "GPE"),
                             ("d", "Destination", "GPE"), ("v", "Vehicle", "VEH"), ("tm", "Time", None)])],
    )


TRANSPORT = [
    ("The army", "200 troops", "Kuwait", "Basra", "truck", "Tuesday", "ORG", "PER"),
    ("The navy", "missiles", "Norfolk", "Bahrain", "ship", "Monday", "ORG", "WEA"),
    ("The Red Cross", "refugees", "Tripoli", "Tunis", "bus", "Sunday", "ORG", "PER"),
    ("The embassy", "diplomats", "Khartoum", "Cairo", "plane", "Friday", "GPE", "PER"),
    ("Rebels", "rifles", "Benghazi", "Sirte", "jeep", "Saturday", "ORG", "WEA"),
]


def transfer_money(f):
    return (
        f"[{f[0]}|g] [paid|t] [{f[1]}|m] to [{f[2]}|r] on [{f[3]}|tm].",
        [("Transfer-Money", "t", [("g", "Giver", "ORG"), ("m", "Money", None),
                                  ("r", "Recipient", f[4]), ("tm", "Time", None)])],
    )


TRANSFER_MONEY = [
    ("Acme", "$5 million", "the Daily Planet", "Monday", "ORG"),
    ("The World Bank", "$2 billion", "Kenya", "Thursday", "GPE"),
    ("The insurer", "$300,000", "the widow", "Friday", "PER"),
    ("Microsoft", "$1.5 billion", "the regulators", "Wednesday", "ORG"),
    ("The club", "20 million euros", "the striker", "Tuesday", "PER"),
]


def meet(f):
    return (
        f"Leaders of [{f[0]}|a] and [{f[1]}|b] [met|t] in [{f[2]}|p] on [{f[3]}|tm]. "
        f"The talks lasted six hours.",
        [("Meet", "t", [("a", "Entity", "GPE"), ("b", "Entity", "GPE"), ("p", "Place", "GPE"),
                        ("tm", "Time", None)])],
    )


MEET = [
    ("France", "Germany", "Geneva", "Thursday"),
    ("Japan", "Korea", "Seoul", "Monday"),
    ("Egypt", "Israel", "Camp David", "Sunday"),
    ("India", "Pakistan", "Delhi", "Friday"),
    ("Brazil", "Argentina", "Montevideo", "Wednesday"),
]

MISC = [
    (
        "Voters in [Chile|p] [elected|t] [Ana Ruiz|pe] as [president|pos] on [Sunday|tm].",
        [("Elect", "t", [("p", "Place", "GPE"), ("pe", "Person", "PER"),
                         ("pos", "Position", None), ("tm", "Time", None)])],
    ),
    (
        "[Two engineers|ag] [founded|t] [Nova Systems|o] in [Oslo|p] in [2001|tm].",
        [("Start-Org", "t", [("ag", "Agent", "PER"), ("o", "Org", "ORG"),
                             ("p", "Place", "GPE"), ("tm", "Time", None)])],
    ),
    (
        "[Students|en] [marched|t] through [Paris|p] on [Saturday|tm] to protest the new law.",
        [("Demonstrate", "t", [("en", "Entity", "PER"), ("p", "Place", "GPE"), ("tm", "Time", None)])],
    ),
    (
        "[A judge|j] [sentenced|t] [Mark Cole|d] to [ten years|s] in prison for [fraud|cr].",
        [("Sentence", "t", [("j", "Adjudicator", "PER"), ("d", "Defendant", "PER"),
                            ("s", "Sentence", None), ("cr", "Crime", None)])],
    ),
    (
        "The singer was [born|t] in [Memphis|p] in [1935|tm]. Her family later moved to Chicago.",
        [("Be-Born", "t", [("p", "Place", "GPE"), ("tm", "Time", None)])],
    ),
]


def main():
    families = [
        (attack, ATTACK), (attack_injure, ATTACK_INJURE), (die_attack, DIE_ATTACK),
        (end_position, END_POSITION), (start_end, START_END), (arrest_charge, ARREST_CHARGE),
        (transport, TRANSPORT), (transfer_money, TRANSFER_MONEY), (meet, MEET),
    ]
    docs = []
    for fn, fills in families:
        for fill in fills:
            markup, events = fn(fill)
            docs.append(make_doc(f"syn{len(docs) + 1:03d}", markup, events))
    for markup, events in MISC:
        docs.append(make_doc(f"syn{len(docs) + 1:03d}", markup, events))

    ontology = json.loads(ONTOLOGY.read_text())
    allowed = {
        (ev["name"], role): set(types)
        for ev in ontology["event_types"]
        for role, types in ev.get("role_entity_types", {}).items()
    }
    for doc in docs:
        for ev in doc["events"]:
            for arg in ev["arguments"]:
                ok = allowed.get((ev["event_type"], arg["gold_role"]))
                et = arg.get("gold_entity_type")
                if ok is not None and et not in ok:
                    sys.exit(f"{doc['doc_id']}: {ev['event_type']}.{arg['gold_role']} does not admit {et}")
    with open(OUT, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc, ensure_ascii=False) + "\n")
    print(f"wrote {len(docs)} documents to {OUT}")


if __name__ == "__main__":
    main()
