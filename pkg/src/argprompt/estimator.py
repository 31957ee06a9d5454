"""Scikit-learn style front end for zero-shot argument role classification."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .constraints import (
    ArgumentState,
    RegularizationResult,
    TraceRecord,
    initial_state,
    parse_order,
    regularize,
)
from .corpus import Document
from .evaluation import Metrics, evaluate
from .prompting import Task, generate_candidates
from .scoring import score_candidates
from .validation import (
    check_aggregation,
    check_backend,
    check_cache,
    check_constraints,
    check_documents,
    check_ontology,
    check_parallelism,
    check_prefix,
    has_kind,
)

__all__ = ["DocumentPrediction", "ZeroShotArgumentClassifier"]


@dataclass
class DocumentPrediction:
    doc: Document
    initial: dict[tuple[str, str], ArgumentState]
    result: RegularizationResult

    @property
    def trace(self) -> list[TraceRecord]:
        return self.result.trace

    def records(self) -> list[dict]:
        """One output row per argument, in document order."""
        rows = []
        for ev in self.doc.events:
            for arg in ev.arguments:
                state = self.result.states[(ev.id, arg.id)]
                rows.append(
                    {
                        "doc_id": self.doc.doc_id,
                        "event_id": ev.id,
                        "argument_id": arg.id,
                        "role": state.current_role,
                        "score": state.current_role_score,
                        "initial_role": state.initial_role,
                    }
                )
        return rows


class ZeroShotArgumentClassifier(BaseEstimator):
    """Predict event argument roles by prompt scoring plus global constraints.

    Each argument span is scored once per candidate role with a prefix
    prompt and a cloze prompt; the best-scored role is the initial
    prediction, which the constraint procedures then regularize. Nothing
    is learned: :meth:`fit` only resolves and validates the configuration.

    Parameters
    ----------
    backend : ScoringBackend
        Language-model scorer for prompted passages.
    ontology : Ontology, path or None
        Event ontology; None loads the bundled ACE-style ontology.
    constraints : list, path, "default" or None
        Constraint specs. None disables regularization.
    prefix : str
        Prefix variant, one of ``full``, ``no-event-type``, ``no-trigger``,
        ``none``, ``alt1``, ``alt2``, ``alt3``.
    aggregation : {"mean", "sum"}
        Token NLL aggregation for the prompting score.
    constraint_order : str or sequence, optional
        Order of constraint kinds; default cross-task, count, event pair.
    parallelism : int
        Upper bound on concurrent documents and on concurrent scoring
        requests per candidate batch.
    cache : ScoreCache, path or None
        Score cache; a path makes it persistent. None keeps it in memory.
    restrict_entity_types : bool
        Only score entity types admissible for some role.
    count_fixpoint : bool
        Re-run count constraints until stable.
    window : {"document", "sentence"}
        Passage scope around the argument.

    Attributes
    ----------
    ontology_ : Ontology
    constraints_ : list of constraint specs
    cache_ : ScoreCache
    """

    def __init__(
        self,
        backend=None,
        ontology=None,
        constraints=None,
        *,
        prefix="full",
        aggregation="mean",
        constraint_order=None,
        parallelism=4,
        cache=None,
        restrict_entity_types=False,
        count_fixpoint=False,
        window="document",
    ):
        self.backend = backend
        self.ontology = ontology
        self.constraints = constraints
        self.prefix = prefix
        self.aggregation = aggregation
        self.constraint_order = constraint_order
        self.parallelism = parallelism
        self.cache = cache
        self.restrict_entity_types = restrict_entity_types
        self.count_fixpoint = count_fixpoint
        self.window = window

    def fit(self, X=None, y=None):
        """Validate the configuration and, if given, the documents in ``X``.

        Returns
        -------
        self
        """
        check_backend(self.backend)
        self.ontology_ = check_ontology(self.ontology)
        self.constraints_ = check_constraints(self.constraints, self.ontology_)
        self.prefix_ = check_prefix(self.prefix)
        check_aggregation(self.aggregation)
        check_parallelism(self.parallelism)
        self.constraint_order_ = parse_order(self.constraint_order)
        if self.window not in ("document", "sentence"):
            raise ValueError(f"window must be 'document' or 'sentence', got {self.window!r}")
        self.cache_ = check_cache(self.cache)
        if X is not None:
            check_documents(X, self.ontology_)
        return self

    def _score(self, doc, event, arg, task):
        passages = generate_candidates(
            doc,
            event,
            arg,
            task,
            self.ontology_,
            self.prefix_,
            restrict_entity_types=self.restrict_entity_types,
            window=self.window,
        )
        return score_candidates(
            self.backend,
            passages,
            self.aggregation,
            cache=self.cache_,
            parallelism=self.parallelism,
        )

    def _predict_document(self, doc: Document) -> DocumentPrediction:
        need_types = has_kind(self.constraints_, "CrossTask")
        entity_order = self.ontology_.entity_type_names()
        states = {}
        for ev in doc.events:
            role_order = self.ontology_.role_names(ev.event_type)
            for arg in ev.arguments:
                eac = self._score(doc, ev, arg, Task.EAC)
                eaet = self._score(doc, ev, arg, Task.EAET) if need_types else None
                states[(ev.id, arg.id)] = initial_state(
                    arg.id, ev.id, eac, eaet, role_order, entity_order
                )
        result = regularize(
            doc,
            states,
            self.constraints_,
            self.ontology_,
            self.constraint_order_,
            count_fixpoint=self.count_fixpoint,
        )
        return DocumentPrediction(doc, states, result)

    def predict_documents(self, X) -> list[DocumentPrediction]:
        """Full per-document results, including initial states and traces."""
        check_is_fitted(self, "ontology_")
        docs = check_documents(X, self.ontology_)
        if self.parallelism == 1 or len(docs) <= 1:
            return [self._predict_document(d) for d in docs]
        with ThreadPoolExecutor(max_workers=min(self.parallelism, len(docs))) as pool:
            return list(pool.map(self._predict_document, docs))

    def predict(self, X) -> list[str]:
        """Final role of every argument, in corpus order."""
        return [r["role"] for p in self.predict_documents(X) for r in p.records()]

    def evaluate(self, X) -> Metrics:
        check_is_fitted(self, "ontology_")
        docs = check_documents(X, self.ontology_)
        preds = self.predict_documents(docs)
        assignments = {
            (r["doc_id"], r["event_id"], r["argument_id"]): r["role"]
            for p in preds
            for r in p.records()
        }
        return evaluate(assignments, docs)

    def score(self, X, y=None) -> float:
        """Micro F1 against the gold roles carried by ``X``."""
        return self.evaluate(X).f1
