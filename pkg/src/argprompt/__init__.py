"""Zero-shot event argument role classification.

Candidate roles are scored by a language model through prefix and cloze
prompts; the initial predictions are then regularized by declarative
global constraints.
"""

from .constraints import ArgumentState, TraceRecord, regularize, replay_trace
from .corpus import ArgumentMention, Document, EventMention, Span, read_corpus, shared_arguments
from .estimator import DocumentPrediction, ZeroShotArgumentClassifier
from .evaluation import Metrics, ablation_report, evaluate
from .ontology import Ontology, load_constraints, load_ontology, verbalize
from .prompting import PrefixVariant, Task, build_cloze_passage, build_prefix, generate_candidates
from .scoring import (
    HttpCompletionBackend,
    ScoreCache,
    ScoredLabel,
    TableBackend,
    ToyTrigramBackend,
    rank,
    score_candidates,
    score_passage,
)

__version__ = "0.1.0"

__all__ = [
    "ArgumentMention",
    "ArgumentState",
    "Document",
    "DocumentPrediction",
    "EventMention",
    "HttpCompletionBackend",
    "Metrics",
    "Ontology",
    "PrefixVariant",
    "ScoreCache",
    "ScoredLabel",
    "Span",
    "TableBackend",
    "Task",
    "ToyTrigramBackend",
    "TraceRecord",
    "ZeroShotArgumentClassifier",
    "ablation_report",
    "build_cloze_passage",
    "build_prefix",
    "evaluate",
    "generate_candidates",
    "load_constraints",
    "load_ontology",
    "rank",
    "read_corpus",
    "regularize",
    "replay_trace",
    "score_candidates",
    "score_passage",
    "shared_arguments",
    "verbalize",
]
