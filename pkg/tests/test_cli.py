import json

import pytest
from support import CORPUS, GOLDEN, NOISY_TABLE, free_port

from argprompt.cli import RunConfig, main, run_ablate
from argprompt.corpus import iter_arguments
from argprompt.prompting import Task, generate_candidates
from argprompt.validation import bundled_path

TABLE = ["--corpus", str(CORPUS), "--backend", "table", "--table", str(NOISY_TABLE)]


def lines(path):
    return [json.loads(l) for l in open(path, encoding="utf-8")]


@pytest.mark.parametrize(
    "constraints, golden",
    [("default", "predictions_default.jsonl"), (str(bundled_path("constraints_extra.json")), "predictions_extra.jsonl")],
)
def test_predict_matches_golden(tmp_path, constraints, golden):
    out = tmp_path / "pred.jsonl"
    assert main(["predict", *TABLE, "--constraints", constraints, "--out", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / golden).read_bytes()
    trace = lines(f"{out}.trace.jsonl")
    assert trace and {"doc_id", "kind", "before", "after", "reason", "scores"} <= set(trace[0])


def test_predict_without_constraints_is_argmax(tmp_path):
    out = tmp_path / "pred.jsonl"
    assert main(["predict", *TABLE, "--out", str(out), "--trace", str(tmp_path / "t.jsonl")]) == 0
    rows = lines(out)
    assert all(r["role"] == r["initial_role"] for r in rows)
    assert out.read_bytes() == (GOLDEN / "predictions_none.jsonl").read_bytes()
    assert (tmp_path / "t.jsonl").read_text() == ""


def test_evaluate_golden(tmp_path, capsys):
    metrics = tmp_path / "m.json"
    code = main(["evaluate", "--corpus", str(CORPUS), "--predictions", str(GOLDEN / "predictions_default.jsonl"), "--out", str(metrics)])
    assert code == 0
    assert capsys.readouterr().out.strip() == "F1 = 0.560 (158/282)"
    saved = json.loads(metrics.read_text())
    assert saved["f1"] == 0.560 and saved["n_correct"] == 158


def test_evaluate_gold_dump(tmp_path, corpus, capsys):
    path = tmp_path / "gold.jsonl"
    with open(path, "w") as fh:
        for d, e, a in iter_arguments(corpus):
            fh.write(json.dumps({"doc_id": d.doc_id, "event_id": e.id, "argument_id": a.id, "role": a.gold_role}) + "\n")
    assert main(["evaluate", "--corpus", str(CORPUS), "--predictions", str(path)]) == 0
    assert capsys.readouterr().out.startswith("F1 = 1.000")


def test_evaluate_truncated_predictions(tmp_path, capsys):
    path = tmp_path / "short.jsonl"
    rows = (GOLDEN / "predictions_default.jsonl").read_text().splitlines()
    path.write_text("\n".join(rows[:-1]) + "\n")
    assert main(["evaluate", "--corpus", str(CORPUS), "--predictions", str(path)]) == 3
    err = capsys.readouterr().err
    assert "do not align" in err and "missing 1" in err
    last = json.loads(rows[-1])
    assert f"{last['doc_id']}/{last['event_id']}/{last['argument_id']}" in err


def test_unreachable_backend_exit_code(tmp_path, capsys):
    code = main(
        ["predict", "--corpus", str(CORPUS), "--backend", "http", "--endpoint", f"http://127.0.0.1:{free_port()}/v1",
         "--retries", "1", "--backoff", "0.001", "--out", str(tmp_path / "p.jsonl")]
    )
    assert code == 4
    assert "backend error" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["predict"],
        ["predict", "--corpus", "/nonexistent/corpus.jsonl"],
        ["predict", "--corpus", str(CORPUS), "--parallelism", "0"],
        ["predict", "--corpus", str(CORPUS), "--backend", "http"],
        ["predict", "--corpus", str(CORPUS), "--constraint-order", "count,foo"],
        ["ablate", "--corpus", str(CORPUS)],
        ["ablate", "--corpus", str(CORPUS), "--constraint-grid", "all,-nothing"],
        ["dump-prompts", "--corpus", str(CORPUS), "--tasks", "eac,xyz"],
    ],
)
def test_config_errors(argv, capsys):
    assert main(argv) == 2
    assert "config error" in capsys.readouterr().err


def test_argparse_rejects_bad_choice():
    with pytest.raises(SystemExit) as exc:
        main(["predict", "--prefix", "bogus"])
    assert exc.value.code == 2


def test_data_errors(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text(CORPUS.read_text().splitlines()[0].replace('"end": 28', '"end": 29') + "\n")
    assert main(["validate", "--corpus", str(bad)]) == 3
    bad_constraints = tmp_path / "c.json"
    bad_constraints.write_text('[{"kind": "Count", "event": "Attack", "role": "Nobody"}]')
    assert main(["validate", "--constraints", str(bad_constraints)]) == 3
    assert capsys.readouterr().err.count("data error") == 2


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"corpus": str(CORPUS), "backend": "table", "table": str(NOISY_TABLE), "constraints": "default", "prefix": "none"}))
    out = tmp_path / "p.jsonl"
    assert main(["predict", "--config", str(cfg), "--prefix", "full", "--out", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / "predictions_default.jsonl").read_bytes()
    cfg.write_text(json.dumps({"corpus": str(CORPUS), "colour": "red"}))
    assert main(["predict", "--config", str(cfg)]) == 2


def test_dump_prompts(tmp_path, corpus, ace):
    out = tmp_path / "prompts.jsonl"
    assert main(["dump-prompts", "--corpus", str(CORPUS), "--tasks", "eac,eaet", "--out", str(out)]) == 0
    rows = lines(out)
    assert set(rows[0]) == {"argument_id", "task", "label", "full_text"}
    doc = corpus[0]
    ev = doc.events[0]
    expected = [p.full_text for a in ev.arguments for t in Task for p in generate_candidates(doc, ev, a, t, ace)]
    assert [r["full_text"] for r in rows[: len(expected)]] == expected
    assert rows[0]["full_text"].startswith('This is a Attack event whose occurrence is most clearly expressed by "fired." In Baghdad')


def test_validate_summary(capsys):
    assert main(["validate", "--corpus", str(CORPUS), "--constraints", str(bundled_path("constraints_extra.json"))]) == 0
    out = capsys.readouterr().out
    assert "33 event types" in out and "constraints: 11" in out and "50 documents, 282 arguments" in out


def test_single_cell_ablation_equals_predict_then_evaluate(tmp_path, capsys):
    _, payload = run_ablate(
        RunConfig(corpus=str(CORPUS), backend="table", table=str(NOISY_TABLE), constraints="default", constraint_grid="all")
    )
    assert payload["rows"] == [{"configuration": "all", "f1": 56.0, "delta": 0.0}]
    capsys.readouterr()
    main(["predict", *TABLE, "--constraints", "default", "--out", str(tmp_path / "p.jsonl")])
    main(["evaluate", "--corpus", str(CORPUS), "--predictions", str(tmp_path / "p.jsonl")])
    assert "F1 = 0.560" in capsys.readouterr().out


def test_prefix_grid_cache_hits_match_passage_overlap(corpus, ace, capsys):
    grid = ["full", "no-event-type", "no-trigger", "none"]
    _, payload = run_ablate(RunConfig(corpus=str(CORPUS), constraints="default", prefix_grid=",".join(grid), parallelism=1))
    assert [r["configuration"] for r in payload["rows"]] == grid

    seen, expected = set(), []
    for prefix in grid:
        hits = misses = 0
        for doc, ev, arg in iter_arguments(corpus):
            for task in (Task.EAC, Task.EAET):
                batch = dict.fromkeys(p.full_text for p in generate_candidates(doc, ev, arg, task, ace, prefix))
                hits += sum(t in seen for t in batch)
                misses += sum(t not in seen for t in batch)
                seen.update(batch)
        expected.append((hits, misses))
    got = [(c["cache_hits"], c["cache_misses"]) for c in payload["cells"]]
    assert got == expected
    assert all(h > 0 for h, _ in got[1:])


def test_warm_cache_rerun_is_byte_identical(tmp_path):
    cache = tmp_path / "scores.jsonl"
    argv = ["predict", "--corpus", str(CORPUS), "--constraints", "default", "--cache", str(cache)]
    assert main([*argv, "--out", str(tmp_path / "cold.jsonl")]) == 0
    size = cache.stat().st_size
    assert main([*argv, "--out", str(tmp_path / "warm.jsonl")]) == 0
    assert cache.stat().st_size == size
    assert (tmp_path / "cold.jsonl").read_bytes() == (tmp_path / "warm.jsonl").read_bytes()
    assert (tmp_path / "cold.jsonl.trace.jsonl").read_bytes() == (tmp_path / "warm.jsonl.trace.jsonl").read_bytes()
