"""Helpers shared by the test modules."""

import json
import random
import socket
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from argprompt.constraints import initial_state
from argprompt.corpus import Span
from argprompt.prompting import Task, generate_candidates
from argprompt.scoring import ScoredLabel, ScoringBackend, TableBackend
from argprompt.validation import bundled_path

DATA = Path(__file__).parent / "data"
CORPUS = bundled_path("synthetic_corpus.jsonl")
NOISY_TABLE = DATA / "noisy_table.json"
GOLDEN = DATA / "golden"
BAGHDAD = "In Baghdad, a bomb was fired at 17 people."


def span_of(text, sub, occurrence=0):
    start = -1
    for _ in range(occurrence + 1):
        start = text.index(sub, start + 1)
    return Span(start, start + len(sub), sub)


def oracle_table(docs, ontology, prefix="full"):
    """Table giving every gold label the strictly highest score."""
    table = {}
    for doc in docs:
        for ev in doc.events:
            for arg in ev.arguments:
                for task, gold in ((Task.EAC, arg.gold_role), (Task.EAET, arg.gold_entity_type)):
                    for p in generate_candidates(doc, ev, arg, task, ontology, prefix):
                        value = -1.0 if p.label == gold else -5.0
                        # EAC and EAET passages can coincide ("person"); keep the best
                        table[p.full_text] = max(value, table.get(p.full_text, value))
    return TableBackend(table)


class TransformedBackend(ScoringBackend):
    """Applies a strictly increasing map to another backend's scores."""

    def __init__(self, inner, fn, name):
        self.inner, self.fn = inner, fn
        self.identity = f"{inner.identity}|{name}"

    def score(self, text, aggregation="mean"):
        s = self.inner.score(text, aggregation)
        return type(s)(self.fn(s.value), s.n_tokens)


def package_states(raw, doc, ontology):
    """ArgumentStates for the raw (eac, eaet) score lists of a random instance."""
    etype = {ev.id: ev.event_type for ev in doc.events}
    out = {}
    for (ev_id, arg_id), (eac, eaet) in raw.items():
        out[(ev_id, arg_id)] = initial_state(
            arg_id,
            ev_id,
            [ScoredLabel(l, s) for l, s in eac],
            [ScoredLabel(l, s) for l, s in eaet],
            ontology.role_names(etype[ev_id]),
            ontology.entity_type_names(),
        )
    return out


class MockCompletionServer:
    """Local echo-scoring endpoint serving fixed token log-probabilities.

    ``responses`` maps prompt text to the log-prob list to return (None
    entries allowed). Each request sleeps a random latency drawn from
    ``latency`` and the first ``failures`` requests get ``fail_status``.
    """

    def __init__(self, responses, latency=(0.0, 0.0), failures=0, fail_status=503, seed=0):
        self.responses = dict(responses)
        self.latency = latency
        self.failures = failures
        self.fail_status = fail_status
        self.requests = []
        self._rng = random.Random(seed)
        self._lock = threading.Lock()
        server = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_POST(self):
                body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
                with server._lock:
                    server.requests.append((body, self.headers.get("Authorization")))
                    failing = server.failures > 0
                    server.failures -= failing
                    delay = server._rng.uniform(*server.latency)
                time.sleep(delay)
                if failing:
                    self._send(server.fail_status, {"error": "unavailable"})
                    return
                values = server.responses.get(body["prompt"])
                if values is None:
                    self._send(404, {"error": "unknown prompt"})
                    return
                tokens = [f"t{i}" for i in range(len(values))]
                self._send(200, {"choices": [{"text": body["prompt"], "logprobs": {"tokens": tokens, "token_logprobs": values}}]})

            def _send(self, status, payload):
                data = json.dumps(payload).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)

    @property
    def url(self):
        host, port = self._httpd.server_address
        return f"http://{host}:{port}/v1/completions"

    def __enter__(self):
        self._thread.start()
        return self

    def __exit__(self, *exc):
        self._httpd.shutdown()
        self._httpd.server_close()


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]
