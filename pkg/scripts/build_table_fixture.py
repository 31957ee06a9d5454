"""Regenerate tests/data/noisy_table.json.

Scores every full-prefix EAC and EAET passage of the synthetic corpus with
a hash-derived value in [-5, -2). For about two thirds of the arguments the
gold label gets a +1.5 bonus, so initial predictions are partly right and
the constraint procedures have work to do.
"""

import hashlib
import json
from pathlib import Path

from argprompt.corpus import read_corpus
from argprompt.prompting import Task, generate_candidates
from argprompt.validation import bundled_path, check_ontology

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "tests" / "data" / "noisy_table.json"


def unit(*parts):
    digest = hashlib.sha256("\x1f".join(parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


def main():
    ontology = check_ontology(None)
    docs = read_corpus(bundled_path("synthetic_corpus.jsonl"), ontology)
    table = {}
    for doc in docs:
        for ev in doc.events:
            for arg in ev.arguments:
                boost = unit(doc.doc_id, ev.id, arg.id, "boost") < 0.66
                for task, gold in ((Task.EAC, arg.gold_role), (Task.EAET, arg.gold_entity_type)):
                    for p in generate_candidates(doc, ev, arg, task, ontology):
                        value = -2.0 - 3.0 * unit(p.full_text)
                        if boost and p.label == gold:
                            value += 1.5
                        # identical EAC/EAET texts keep the first value
                        table.setdefault(p.full_text, round(value, 4))
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", encoding="utf-8") as fh:
        json.dump(table, fh, indent=0, ensure_ascii=False, sort_keys=True)
        fh.write("\n")
    print(f"wrote {len(table)} entries to {OUT}")


if __name__ == "__main__":
    main()
