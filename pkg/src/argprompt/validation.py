"""Input validation helpers shared by the estimator and the CLI."""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Iterable

from .corpus import CorpusError, Document, read_corpus
from .ontology import (
    ConstraintSpec,
    CountConstraint,
    CrossTaskConstraint,
    EventPairConstraint,
    Ontology,
    load_constraints,
    load_ontology,
    parse_constraints,
)
from .prompting import PrefixVariant
from .scoring import AGGREGATIONS, ScoreCache, ScoringBackend

__all__ = [
    "bundled_path",
    "check_aggregation",
    "check_backend",
    "check_cache",
    "check_constraints",
    "check_documents",
    "check_ontology",
    "check_parallelism",
    "check_prefix",
]


def bundled_path(name: str) -> Path:
    """Path of a data file shipped inside the package."""
    return Path(str(resources.files("argprompt.data").joinpath(name)))


def check_ontology(ontology) -> Ontology:
    if ontology is None:
        return load_ontology(bundled_path("ace_ontology.json"))
    if isinstance(ontology, Ontology):
        return ontology
    return load_ontology(ontology)


def check_constraints(constraints, ontology: Ontology) -> list[ConstraintSpec]:
    """Accept None, ``"default"``, a path, or a list of specs / raw dicts."""
    if constraints is None:
        return []
    if isinstance(constraints, str) and constraints == "default":
        return load_constraints(bundled_path("constraints_default.json"), ontology)
    if isinstance(constraints, (str, Path)):
        return load_constraints(constraints, ontology)
    constraints = list(constraints)
    if all(isinstance(c, (CrossTaskConstraint, CountConstraint, EventPairConstraint)) for c in constraints):
        return constraints
    return parse_constraints(constraints, ontology)


def check_documents(X, ontology: Ontology) -> list[Document]:
    """Normalize ``X`` (a path, one Document, or an iterable of Documents)."""
    if isinstance(X, (str, Path)):
        return read_corpus(X, ontology)
    if isinstance(X, Document):
        X = [X]
    docs = list(X)
    seen = set()
    for doc in docs:
        if not isinstance(doc, Document):
            raise TypeError(f"expected Document instances, got {type(doc).__name__}")
        if doc.doc_id in seen:
            raise CorpusError(f"duplicate doc_id {doc.doc_id!r}")
        seen.add(doc.doc_id)
        doc.validate(ontology)
    return docs


def check_prefix(prefix) -> PrefixVariant:
    try:
        return PrefixVariant(prefix)
    except ValueError:
        choices = ", ".join(v.value for v in PrefixVariant)
        raise ValueError(f"unknown prefix variant {prefix!r}; choose from {choices}") from None


def check_aggregation(aggregation: str) -> str:
    if aggregation not in AGGREGATIONS:
        raise ValueError(f"aggregation must be one of {AGGREGATIONS}, got {aggregation!r}")
    return aggregation


def check_parallelism(parallelism) -> int:
    if not isinstance(parallelism, int) or parallelism < 1:
        raise ValueError(f"parallelism must be a positive integer, got {parallelism!r}")
    return parallelism


def check_backend(backend) -> ScoringBackend:
    if not isinstance(backend, ScoringBackend):
        raise TypeError("backend must be a ScoringBackend instance")
    return backend


def check_cache(cache) -> ScoreCache:
    if isinstance(cache, ScoreCache):
        return cache
    return ScoreCache(cache)


def has_kind(specs: Iterable[ConstraintSpec], kind: str) -> bool:
    return any(s.kind == kind for s in specs)
