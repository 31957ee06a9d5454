"""Scoring backends.

A backend turns a prompted passage into a :class:`PromptScore`, the
negative language-modeling loss of the passage. Backends that expose
per-token log-probabilities implement :meth:`ScoringBackend.token_logprobs`
and inherit the aggregation; the table backend returns stored scores as-is.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import time
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import httpx

logger = logging.getLogger(__name__)

__all__ = [
    "AGGREGATIONS",
    "BackendError",
    "HttpCompletionBackend",
    "PromptScore",
    "ScoringBackend",
    "TableBackend",
    "ToyTrigramBackend",
    "TransportError",
    "aggregate_logprobs",
]

AGGREGATIONS = ("mean", "sum")
DEFAULT_TOKEN_ENV = "ARGPROMPT_API_TOKEN"


class BackendError(RuntimeError):
    """The backend could not produce a score."""


class TransportError(BackendError):
    """A retryable transport-level failure."""


@dataclass(frozen=True)
class PromptScore:
    value: float
    n_tokens: int

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise BackendError(f"non-finite prompting score {self.value!r}")
        if self.n_tokens < 1:
            raise BackendError("a prompting score needs at least one token")


def aggregate_logprobs(logprobs: Sequence[Optional[float]], aggregation: str = "mean") -> PromptScore:
    """Negative mean (or summed) token NLL; ``None`` entries are skipped."""
    if aggregation not in AGGREGATIONS:
        raise ValueError(f"unknown aggregation {aggregation!r}")
    scored = [float(lp) for lp in logprobs if lp is not None]
    if not scored:
        raise BackendError("backend returned zero scorable tokens")
    nll = -math.fsum(scored)
    loss = nll / len(scored) if aggregation == "mean" else nll
    return PromptScore(-loss, len(scored))


class ScoringBackend:
    """Base class. Subclasses set ``identity`` and override one of the hooks."""

    identity = "abstract"

    def token_logprobs(self, text: str) -> list[Optional[float]]:
        raise NotImplementedError

    def score(self, text: str, aggregation: str = "mean") -> PromptScore:
        return aggregate_logprobs(self.token_logprobs(text), aggregation)

    def close(self) -> None:
        pass


class TableBackend(ScoringBackend):
    """Looks passages up in a ``{passage text: score}`` map.

    The stored value is the prompting score itself and is returned for
    either aggregation mode.
    """

    def __init__(self, table: dict[str, float] | str | Path):
        if not isinstance(table, dict):
            with open(table, encoding="utf-8") as fh:
                table = json.load(fh)
        self.table = {str(k): float(v) for k, v in table.items()}
        digest = hashlib.sha256(
            json.dumps(self.table, sort_keys=True).encode("utf-8")
        ).hexdigest()
        self.identity = f"table:{digest[:16]}"

    def score(self, text: str, aggregation: str = "mean") -> PromptScore:
        if aggregation not in AGGREGATIONS:
            raise ValueError(f"unknown aggregation {aggregation!r}")
        try:
            return PromptScore(self.table[text], 1)
        except KeyError:
            raise BackendError(f"no table entry for passage {text[:80]!r}...") from None


class HttpCompletionBackend(ScoringBackend):
    """Echo-scoring client for completion-style HTTP endpoints.

    Sends ``{"prompt": text, "max_tokens": 0, "echo": true, "logprobs": 1}``
    and reads ``choices[0].logprobs.token_logprobs`` from the response.
    Transport failures, 429 and 5xx responses are retried with exponential
    backoff; other HTTP errors fail immediately.
    """

    def __init__(
        self,
        endpoint: str,
        model: str | None = None,
        *,
        token_env: str = DEFAULT_TOKEN_ENV,
        timeout: float = 30.0,
        max_retries: int = 3,
        backoff: float = 0.5,
        client: httpx.Client | None = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.max_retries = max_retries
        self.backoff = backoff
        headers = {}
        token = os.environ.get(token_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        self._client = client or httpx.Client(timeout=timeout, headers=headers)
        self.identity = f"http:{endpoint}:{model or ''}"

    def _request(self, text: str) -> dict:
        body = {"prompt": text, "max_tokens": 0, "echo": True, "logprobs": 1}
        if self.model is not None:
            body = {"model": self.model, **body}
        attempt = 0
        while True:
            try:
                resp = self._client.post(self.endpoint, json=body)
                if resp.status_code == 429 or resp.status_code >= 500:
                    raise TransportError(f"HTTP {resp.status_code} from {self.endpoint}")
                if resp.status_code >= 400:
                    raise BackendError(f"HTTP {resp.status_code} from {self.endpoint}: {resp.text[:200]}")
                return resp.json()
            except (httpx.TransportError, TransportError) as exc:
                if attempt >= self.max_retries:
                    raise TransportError(
                        f"{self.endpoint}: giving up after {attempt + 1} attempts ({exc})"
                    ) from exc
                delay = self.backoff * 2**attempt
                logger.warning("scoring request failed (%s); retrying in %.2fs", exc, delay)
                time.sleep(delay)
                attempt += 1
            except ValueError as exc:
                raise BackendError(f"{self.endpoint}: response is not JSON") from exc

    def token_logprobs(self, text: str) -> list[Optional[float]]:
        if not text:
            raise ValueError("cannot score empty text")
        payload = self._request(text)
        try:
            logprobs = payload["choices"][0]["logprobs"]
            values = logprobs["token_logprobs"]
            tokens = logprobs.get("tokens")
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendError(f"unexpected response shape from {self.endpoint}") from exc
        if tokens is not None and len(tokens) != len(values):
            raise BackendError("tokens and token_logprobs differ in length")
        return values

    def close(self) -> None:
        self._client.close()


def _bundled_text() -> str:
    return resources.files("argprompt.data").joinpath("trigram_corpus.txt").read_text("utf-8")


class ToyTrigramBackend(ScoringBackend):
    """Character trigram language model with add-one smoothing.

    Text is lowercased. Each character is predicted from the two before
    it, with the start of the text padded; the first character gets no
    log-probability, like the first token of an echo-scoring pass. Unseen
    characters share a single unknown slot, so the distribution over the
    vocabulary plus that slot is proper.
    """

    _PAD = "\x02"

    def __init__(self, corpus_path: str | Path | None = None):
        text = _bundled_text() if corpus_path is None else Path(corpus_path).read_text("utf-8")
        text = text.lower()
        if len(text) < 3:
            raise ValueError("trigram training text is too short")
        self.vocab_size = len(set(text)) + 1
        padded = self._PAD * 2 + text
        self._tri = Counter(padded[i : i + 3] for i in range(len(padded) - 2))
        self._bi = Counter(padded[i : i + 2] for i in range(len(padded) - 2))
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        self.identity = f"trigram:{digest[:16]}"

    def logprob(self, context: str, char: str) -> float:
        return math.log((self._tri[context + char] + 1) / (self._bi[context] + self.vocab_size))

    def token_logprobs(self, text: str) -> list[Optional[float]]:
        if not text:
            raise ValueError("cannot score empty text")
        padded = self._PAD * 2 + text.lower()
        out: list[Optional[float]] = [None]
        for i in range(3, len(padded)):
            out.append(self.logprob(padded[i - 2 : i], padded[i]))
        return out
