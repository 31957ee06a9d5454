"""Command-line entry point: predict, evaluate, ablate, dump-prompts, validate.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 backend error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, fields
from itertools import product
from pathlib import Path
from typing import Sequence

from .constraints import parse_order
from .corpus import CorpusError, iter_arguments, read_corpus
from .estimator import ZeroShotArgumentClassifier
from .evaluation import EvaluationError, ablation_report, evaluate
from .ontology import ConstraintError, OntologyError
from .prompting import PrefixVariant, Task, generate_candidates
from .scoring import (
    AGGREGATIONS,
    BackendError,
    HttpCompletionBackend,
    ScoreCache,
    TableBackend,
    ToyTrigramBackend,
)
from .validation import check_constraints, check_ontology, check_prefix

logger = logging.getLogger("argprompt")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_BACKEND = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    corpus: str | None = None
    ontology: str | None = None
    constraints: str | None = None
    backend: str = "trigram"
    endpoint: str | None = None
    model: str | None = None
    table: str | None = None
    trigram_corpus: str | None = None
    token_env: str = "ARGPROMPT_API_TOKEN"
    retries: int = 3
    backoff: float = 0.5
    prefix: str = "full"
    aggregation: str = "mean"
    constraint_order: str | None = None
    parallelism: int = 4
    cache: str | None = None
    out: str | None = None
    trace: str | None = None
    predictions: str | None = None
    tasks: str = "eac"
    prefix_grid: str | None = None
    constraint_grid: str | None = None

    def check(self, *required: str) -> None:
        for name in required:
            if getattr(self, name) is None:
                raise ConfigError(f"--{name.replace('_', '-')} is required")
        for name in ("corpus", "ontology", "constraints", "table", "trigram_corpus", "predictions"):
            value = getattr(self, name)
            if value is not None and not (name == "constraints" and value == "default"):
                if not Path(value).exists():
                    raise ConfigError(f"--{name.replace('_', '-')} path does not exist: {value}")
        if self.parallelism < 1:
            raise ConfigError("--parallelism must be >= 1")
        if self.aggregation not in AGGREGATIONS:
            raise ConfigError(f"--aggregation must be one of {AGGREGATIONS}")
        try:
            check_prefix(self.prefix)
            parse_order(self.constraint_order)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def make_backend(config: RunConfig):
    if config.backend == "http":
        if not config.endpoint:
            raise ConfigError("--endpoint is required for the http backend")
        return HttpCompletionBackend(
            config.endpoint,
            config.model,
            token_env=config.token_env,
            max_retries=config.retries,
            backoff=config.backoff,
        )
    if config.backend == "table":
        if not config.table:
            raise ConfigError("--table is required for the table backend")
        return TableBackend(config.table)
    if config.backend == "trigram":
        return ToyTrigramBackend(config.trigram_corpus)
    raise ConfigError(f"unknown backend {config.backend!r}")


def make_classifier(config: RunConfig, *, backend=None, cache=None, prefix=None, constraints=None):
    ontology = check_ontology(config.ontology)
    specs = check_constraints(config.constraints if constraints is None else constraints, ontology)
    return ZeroShotArgumentClassifier(
        backend or make_backend(config),
        ontology,
        specs,
        prefix=prefix or config.prefix,
        aggregation=config.aggregation,
        constraint_order=config.constraint_order,
        parallelism=config.parallelism,
        cache=cache if cache is not None else ScoreCache(config.cache),
    ).fit()


def _write_jsonl(rows, path: str | None) -> None:
    out = open(path, "w", encoding="utf-8") if path else sys.stdout
    try:
        for row in rows:
            out.write(json.dumps(row, ensure_ascii=False) + "\n")
    finally:
        if path:
            out.close()


def run_predict(config: RunConfig) -> int:
    config.check("corpus")
    clf = make_classifier(config)
    docs = read_corpus(config.corpus, clf.ontology_)
    preds = clf.predict_documents(docs)
    _write_jsonl((row for p in preds for row in p.records()), config.out)
    trace_path = config.trace or (f"{config.out}.trace.jsonl" if config.out else None)
    if trace_path:
        _write_jsonl((rec.to_dict() for p in preds for rec in p.trace), trace_path)
    logger.info("cache: %s", clf.cache_.stats())
    return EXIT_OK


def read_predictions(path: str) -> dict[tuple[str, str, str], str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                key = (rec["doc_id"], rec["event_id"], rec["argument_id"])
                role = rec["role"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise EvaluationError(f"{path}:{lineno}: malformed prediction ({exc})") from exc
            if key in out:
                raise EvaluationError(f"{path}:{lineno}: duplicate prediction for {'/'.join(key)}")
            out[key] = role
    return out


def run_evaluate(config: RunConfig) -> int:
    config.check("corpus", "predictions")
    ontology = check_ontology(config.ontology)
    docs = read_corpus(config.corpus, ontology)
    assignments = read_predictions(config.predictions)
    expected = {(d.doc_id, e.id, a.id) for d, e, a in iter_arguments(docs)}
    missing = sorted(expected - set(assignments))
    extra = sorted(set(assignments) - expected)
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing {len(missing)}: " + ", ".join("/".join(k) for k in missing[:10]))
        if extra:
            parts.append(f"extra {len(extra)}: " + ", ".join("/".join(k) for k in extra[:10]))
        raise EvaluationError("predictions do not align with corpus (" + "; ".join(parts) + ")")
    metrics = evaluate(assignments, docs)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            json.dump(metrics.to_dict(), fh, indent=2)
            fh.write("\n")
    print(f"F1 = {metrics.f1:.3f} ({metrics.n_correct}/{metrics.n_arguments})")
    return EXIT_OK


CONSTRAINT_TOGGLES = {
    "all": None,
    "none": (),
    "-cross-task": ("Count", "EventPair"),
    "-count": ("CrossTask", "EventPair"),
    "-event-pair": ("CrossTask", "Count"),
}


def _split(value: str | None) -> list[str]:
    return [v.strip() for v in (value or "").split(",") if v.strip()]


def ablation_cells(config: RunConfig) -> list[tuple[str, str, str]]:
    """(cell name, prefix variant, constraint toggle) for every grid cell."""
    prefixes = _split(config.prefix_grid) or [config.prefix]
    toggles = _split(config.constraint_grid) or ["all"]
    if not config.prefix_grid and not config.constraint_grid:
        raise ConfigError("ablate needs --prefix-grid and/or --constraint-grid")
    for p in prefixes:
        try:
            check_prefix(p)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    for t in toggles:
        if t not in CONSTRAINT_TOGGLES:
            raise ConfigError(f"unknown constraint toggle {t!r}; choose from {list(CONSTRAINT_TOGGLES)}")
    cells = []
    for p, t in product(prefixes, toggles):
        if len(prefixes) > 1 and len(toggles) > 1:
            name = f"{p} / {t}"
        else:
            name = p if len(prefixes) > 1 else t
        cells.append((name, p, t))
    return cells


def run_ablate(config: RunConfig) -> tuple[int, dict]:
    config.check("corpus")
    cells = ablation_cells(config)
    ontology = check_ontology(config.ontology)
    all_specs = check_constraints(config.constraints, ontology)
    docs = read_corpus(config.corpus, ontology)
    backend = make_backend(config)
    cache = ScoreCache(config.cache)
    results, cell_info = {}, []
    for name, prefix, toggle in cells:
        kinds = CONSTRAINT_TOGGLES[toggle]
        specs = all_specs if kinds is None else [s for s in all_specs if s.kind in kinds]
        before = dict(cache.stats())
        try:
            clf = make_classifier(config, backend=backend, cache=cache, prefix=prefix, constraints=specs)
            results[name] = clf.evaluate(docs)
        except (BackendError, EvaluationError, ValueError) as exc:
            results[name] = exc
        after = cache.stats()
        cell_info.append(
            {
                "configuration": name,
                "prefix": prefix,
                "constraints": toggle,
                "cache_hits": after["hits"] - before["hits"],
                "cache_misses": after["misses"] - before["misses"],
            }
        )
    report = ablation_report(results, baseline=cells[0][0])
    print(report.to_text())
    payload = {**report.to_dict(), "cells": cell_info}
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return EXIT_OK, payload


def run_dump_prompts(config: RunConfig) -> int:
    config.check("corpus")
    ontology = check_ontology(config.ontology)
    docs = read_corpus(config.corpus, ontology)
    try:
        tasks = [Task(t.upper()) for t in _split(config.tasks)]
    except ValueError as exc:
        raise ConfigError(f"--tasks: {exc}") from exc
    rows = (
        {"argument_id": p.argument_id, "task": p.task.value, "label": p.label, "full_text": p.full_text}
        for doc, ev, arg in iter_arguments(docs)
        for task in tasks
        for p in generate_candidates(doc, ev, arg, task, ontology, config.prefix)
    )
    _write_jsonl(rows, config.out)
    return EXIT_OK


def run_validate(config: RunConfig) -> int:
    ontology = check_ontology(config.ontology)
    specs = check_constraints(config.constraints, ontology)
    n_docs = n_args = 0
    if config.corpus:
        docs = read_corpus(config.corpus, ontology)
        n_docs = len(docs)
        n_args = sum(1 for _ in iter_arguments(docs))
    print(
        f"ontology: {len(ontology.event_types)} event types, {len(ontology.entity_types)} entity types; "
        f"constraints: {len(specs)}; corpus: {n_docs} documents, {n_args} arguments"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of option values; flags override it")
    common.add_argument("--corpus")
    common.add_argument("--ontology", help="ontology JSON (default: bundled ACE-style ontology)")
    common.add_argument("--constraints", help='constraint JSON, or "default" for the bundled suite')
    common.add_argument("--backend", choices=["http", "table", "trigram"])
    common.add_argument("--endpoint")
    common.add_argument("--model")
    common.add_argument("--table")
    common.add_argument("--trigram-corpus")
    common.add_argument("--token-env", help="environment variable holding the bearer token")
    common.add_argument("--retries", type=int)
    common.add_argument("--backoff", type=float)
    common.add_argument("--prefix", choices=[v.value for v in PrefixVariant])
    common.add_argument("--aggregation", choices=list(AGGREGATIONS))
    common.add_argument("--constraint-order", help="e.g. cross-task,count,event-pair")
    common.add_argument("--parallelism", type=int)
    common.add_argument("--cache", help="persistent JSONL score cache")
    common.add_argument("--out")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="argprompt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("predict", parents=[common], help="predict argument roles")
    p.add_argument("--trace", help="trace JSONL path (default: <out>.trace.jsonl)")
    p = sub.add_parser("evaluate", parents=[common], help="score predictions against gold roles")
    p.add_argument("--predictions")
    p = sub.add_parser("ablate", parents=[common], help="run a configuration grid")
    p.add_argument("--prefix-grid", help="comma-separated prefix variants")
    p.add_argument("--constraint-grid", help="comma-separated: all, none, -cross-task, -count, -event-pair")
    p = sub.add_parser("dump-prompts", parents=[common], help="write generated passages as JSONL")
    p.add_argument("--tasks", help="comma-separated: eac, eaet")
    sub.add_parser("validate", parents=[common], help="lint ontology, constraints and corpus")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    names = {f.name for f in fields(RunConfig)}
    values: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        loaded = {k.replace("-", "_"): v for k, v in loaded.items()}
        unknown = sorted(set(loaded) - names)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        values.update(loaded)
    for name in names:
        value = getattr(args, name, None)
        if value is not None:
            values[name] = value
    return RunConfig(**values)


COMMANDS = {
    "predict": run_predict,
    "evaluate": run_evaluate,
    "ablate": lambda c: run_ablate(c)[0],
    "dump-prompts": run_dump_prompts,
    "validate": run_validate,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](resolve_config(args))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OntologyError, ConstraintError, CorpusError, EvaluationError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
