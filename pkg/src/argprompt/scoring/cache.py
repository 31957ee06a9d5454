"""Append-only score cache.

Each record is one JSONL line::

    {"key": <sha256 of passage text>, "backend": ..., "aggregation": ..., "value": ..., "n_tokens": ...}

Entries are keyed by ``(backend identity, aggregation, text hash)``.
"""

from __future__ import annotations

import hashlib
import json
import threading
from pathlib import Path

from .backends import PromptScore

__all__ = ["ScoreCache", "text_key"]


def text_key(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class ScoreCache:
    """In-memory score cache, optionally mirrored to a JSONL file.

    Reads are lock-free dictionary lookups; appends are serialized.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._entries: dict[tuple[str, str, str], PromptScore] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    score = PromptScore(float(rec["value"]), int(rec["n_tokens"]))
                    self._entries[(rec["backend"], rec["aggregation"], rec["key"])] = score
                except (ValueError, KeyError, TypeError):
                    # a torn final line from an interrupted run
                    continue

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, backend: str, aggregation: str, text: str) -> PromptScore | None:
        score = self._entries.get((backend, aggregation, text_key(text)))
        with self._lock:
            if score is None:
                self.misses += 1
            else:
                self.hits += 1
        return score

    def put(self, backend: str, aggregation: str, text: str, score: PromptScore) -> None:
        key = text_key(text)
        with self._lock:
            if (backend, aggregation, key) in self._entries:
                return
            self._entries[(backend, aggregation, key)] = score
            if self.path is not None:
                rec = {
                    "key": key,
                    "backend": backend,
                    "aggregation": aggregation,
                    "value": score.value,
                    "n_tokens": score.n_tokens,
                }
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(rec) + "\n")

    def stats(self) -> dict[str, int]:
        return {"hits": self.hits, "misses": self.misses, "entries": len(self._entries)}
