from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from ..prompting import PromptedPassage
from .backends import PromptScore, ScoringBackend
from .cache import ScoreCache

__all__ = ["ScoredLabel", "rank", "score_candidates", "score_passage"]


@dataclass(frozen=True)
class ScoredLabel:
    label: str
    score: float
    n_tokens: int = 1


def score_passage(backend: ScoringBackend, text: str, aggregation: str = "mean") -> PromptScore:
    if not text:
        raise ValueError("cannot score empty text")
    return backend.score(text, aggregation)


def score_candidates(
    backend: ScoringBackend,
    passages: Sequence[PromptedPassage],
    aggregation: str = "mean",
    *,
    cache: ScoreCache | None = None,
    parallelism: int = 4,
) -> list[ScoredLabel]:
    """Score each passage, returning labels in input order.

    Cache hits are resolved first; the remaining distinct texts are sent
    to the backend on up to ``parallelism`` threads. Any failure aborts the
    whole batch.
    """
    if not passages:
        raise ValueError("no passages to score")
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    scores: dict[str, PromptScore] = {}
    pending: list[str] = []
    for p in passages:
        text = p.full_text
        if text in scores or text in pending:
            continue
        hit = cache.get(backend.identity, aggregation, text) if cache is not None else None
        if hit is not None:
            scores[text] = hit
        else:
            pending.append(text)

    def fetch(text: str) -> PromptScore:
        score = score_passage(backend, text, aggregation)
        if cache is not None:
            cache.put(backend.identity, aggregation, text, score)
        return score

    if len(pending) == 1 or parallelism == 1:
        scores.update((t, fetch(t)) for t in pending)
    elif pending:
        with ThreadPoolExecutor(max_workers=min(parallelism, len(pending))) as pool:
            scores.update(zip(pending, pool.map(fetch, pending)))

    out = []
    for p in passages:
        s = scores[p.full_text]
        out.append(ScoredLabel(p.label, s.value, s.n_tokens))
    return out


def rank(scored: Sequence[ScoredLabel], label_order: Sequence[str] | None = None) -> list[ScoredLabel]:
    """Best score first; exact ties keep ``label_order`` (default: input order)."""
    if not scored:
        raise ValueError("nothing to rank")
    order = label_order if label_order is not None else [s.label for s in scored]
    position = {label: i for i, label in enumerate(order)}
    return sorted(scored, key=lambda s: (-s.score, position.get(s.label, len(position))))
