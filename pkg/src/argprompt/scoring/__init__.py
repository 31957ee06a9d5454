from .backends import (
    AGGREGATIONS,
    BackendError,
    HttpCompletionBackend,
    PromptScore,
    ScoringBackend,
    TableBackend,
    ToyTrigramBackend,
    TransportError,
    aggregate_logprobs,
)
from .cache import ScoreCache, text_key
from .scorer import ScoredLabel, rank, score_candidates, score_passage

__all__ = [
    "AGGREGATIONS",
    "BackendError",
    "HttpCompletionBackend",
    "PromptScore",
    "ScoreCache",
    "ScoredLabel",
    "ScoringBackend",
    "TableBackend",
    "ToyTrigramBackend",
    "TransportError",
    "aggregate_logprobs",
    "rank",
    "score_candidates",
    "score_passage",
    "text_key",
]
