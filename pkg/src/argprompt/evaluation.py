"""Micro-averaged argument classification metrics and ablation tables."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .corpus import Document, iter_arguments

__all__ = [
    "AblationReport",
    "AblationRow",
    "EvaluationError",
    "Metrics",
    "ablation_report",
    "evaluate",
]

ArgKey = tuple[str, str, str]  # (doc_id, event_id, argument_id)


class EvaluationError(ValueError):
    pass


@dataclass
class Metrics:
    n_arguments: int
    n_predicted: int
    n_correct: int
    precision: float
    recall: float
    f1: float
    per_role: dict[str, dict[str, int]] = field(default_factory=dict)
    confusion: dict[tuple[str, str], int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n_arguments": self.n_arguments,
            "n_predicted": self.n_predicted,
            "n_correct": self.n_correct,
            "precision": round(self.precision, 3),
            "recall": round(self.recall, 3),
            "f1": round(self.f1, 3),
            "per_role": self.per_role,
            "confusion": [
                {"gold": g, "predicted": p, "count": c} for (g, p), c in sorted(self.confusion.items())
            ],
        }


def evaluate(assignments: Mapping[ArgKey, str], docs: Sequence[Document]) -> Metrics:
    """Score predicted roles against gold roles, matching arguments by identity.

    With spans given every argument is predicted, so precision, recall and
    F1 coincide with accuracy. Unpredicted arguments lower recall only.
    """
    gold: dict[ArgKey, str] = {}
    missing = []
    for doc, ev, arg in iter_arguments(docs):
        key = (doc.doc_id, ev.id, arg.id)
        if arg.gold_role is None:
            missing.append(key)
        else:
            gold[key] = arg.gold_role
    if missing:
        shown = ", ".join("/".join(k) for k in missing[:10])
        raise EvaluationError(f"{len(missing)} argument(s) lack a gold role: {shown}")
    if not gold:
        raise EvaluationError("no arguments to evaluate")
    extra = [k for k in assignments if k not in gold]
    if extra:
        shown = ", ".join("/".join(k) for k in extra[:10])
        raise EvaluationError(f"{len(extra)} prediction(s) for unknown arguments: {shown}")

    per_role: dict[str, Counter] = {}
    confusion: Counter = Counter()
    n_correct = 0
    for key, g in gold.items():
        per_role.setdefault(g, Counter())["n_gold"] += 1
        p = assignments.get(key)
        if p is None:
            continue
        confusion[(g, p)] += 1
        per_role.setdefault(p, Counter())["n_pred"] += 1
        if p == g:
            n_correct += 1
            per_role[g]["n_correct"] += 1
    n_pred = len(assignments)
    precision = n_correct / n_pred if n_pred else 0.0
    recall = n_correct / len(gold)
    # count form of 2PR/(P+R); exact when n_pred == n_gold
    f1 = 2 * n_correct / (n_pred + len(gold))
    roles = {
        r: {k: c[k] for k in ("n_gold", "n_pred", "n_correct")} for r, c in sorted(per_role.items())
    }
    return Metrics(len(gold), n_pred, n_correct, precision, recall, f1, roles, dict(confusion))


@dataclass(frozen=True)
class AblationRow:
    name: str
    f1: float | None
    delta: float | None
    error: str | None = None


@dataclass
class AblationReport:
    baseline: str
    rows: list[AblationRow]

    def to_dict(self) -> dict:
        return {
            "baseline": self.baseline,
            "rows": [
                {
                    "configuration": r.name,
                    "f1": None if r.f1 is None else round(r.f1 * 100, 1),
                    "delta": r.delta,
                    **({"error": r.error} if r.error else {}),
                }
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        width = max(len("Configuration"), *(len(r.name) for r in self.rows))
        lines = [f"{'Configuration':<{width}}  {'F1':>6}  {'Delta':>6}", "-" * (width + 16)]
        for r in self.rows:
            if r.error:
                lines.append(f"{r.name:<{width}}  {'FAILED':>6}  {'':>6}  {r.error}")
                continue
            delta = "-" if r.name == self.baseline else f"{r.delta:.1f}"
            lines.append(f"{r.name:<{width}}  {r.f1 * 100:6.1f}  {delta:>6}")
        return "\n".join(lines)


def ablation_report(
    results: Mapping[str, float | Metrics | Exception], baseline: str | None = None
) -> AblationReport:
    """Tabulate F1 per configuration with its difference to ``baseline``.

    Differences are in percentage points rounded to one decimal. Failed
    cells are passed as exceptions and reported without numbers.
    """
    if not results:
        raise ValueError("no configurations to report")
    baseline = next(iter(results)) if baseline is None else baseline
    f1s: dict[str, float | None] = {}
    errors: dict[str, str] = {}
    for name, res in results.items():
        if isinstance(res, Exception):
            f1s[name] = None
            errors[name] = f"{type(res).__name__}: {res}"
        else:
            f1s[name] = res.f1 if isinstance(res, Metrics) else float(res)
    base = f1s.get(baseline)
    if base is None:
        raise ValueError(f"baseline {baseline!r} has no result")
    rows = []
    for name, f1 in f1s.items():
        delta = None if f1 is None else (0.0 if name == baseline else round((f1 - base) * 100, 1))
        rows.append(AblationRow(name, f1, delta, errors.get(name)))
    return AblationReport(baseline, rows)
