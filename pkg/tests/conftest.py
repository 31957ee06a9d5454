import pytest
from support import BAGHDAD, CORPUS, span_of

from argprompt.corpus import ArgumentMention, Document, EventMention, read_corpus
from argprompt.ontology import ontology_from_dict
from argprompt.validation import check_ontology


@pytest.fixture(scope="session")
def ace():
    return check_ontology(None)


@pytest.fixture(scope="session")
def corpus(ace):
    return read_corpus(CORPUS, ace)


@pytest.fixture
def small_ontology():
    return ontology_from_dict(
        {
            "event_types": [
                {
                    "name": "Attack",
                    "full_name": "Conflict:Attack",
                    "roles": [{"name": r} for r in ["Attacker", "Instrument", "Place", "Time", "Target"]],
                    "role_entity_types": {
                        "Target": ["PER", "ORG", "VEH"],
                        "Instrument": ["WEA", "VEH"],
                        "Place": ["LOC", "GPE"],
                    },
                },
                {
                    "name": "End-Position",
                    "roles": [{"name": r} for r in ["Person", "Entity", "Position", "Time"]],
                },
            ],
            "entity_types": [
                {"name": "PER", "verbalization": "person"},
                {"name": "ORG", "verbalization": "organization"},
                {"name": "GPE", "verbalization": "geopolitical entity"},
                {"name": "LOC", "verbalization": "location"},
                {"name": "FAC", "verbalization": "facility"},
                {"name": "VEH", "verbalization": "vehicle"},
                {"name": "WEA", "verbalization": "weapon"},
            ],
        }
    )


@pytest.fixture
def baghdad():
    ev = EventMention(
        "e1",
        "Attack",
        span_of(BAGHDAD, "fired"),
        (
            ArgumentMention("a1", span_of(BAGHDAD, "Baghdad"), "Place", "GPE"),
            ArgumentMention("a2", span_of(BAGHDAD, "bomb"), "Instrument", "WEA"),
            ArgumentMention("a3", span_of(BAGHDAD, "17 people"), "Target", "PER"),
        ),
    )
    return Document("baghdad", BAGHDAD, (ev,))


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Records one PASS/FAIL line for an acceptance criterion."""
    label = request.node.function.__doc__.strip().splitlines()[0]
    box = {"detail": ""}
    yield box
    failed = getattr(request.node, "rep_call", None) is None or request.node.rep_call.failed
    line = f"[{'FAIL' if failed else 'PASS'}] {label}" + (f" ({box['detail']})" if box["detail"] else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    rep = yield
    if rep.when == "call":
        item.rep_call = rep
    return rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
