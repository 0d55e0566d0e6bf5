from __future__ import annotations

from pathlib import Path

import pytest

from snippet_bench.rdf import RDF_TYPE, RDFS_LABEL, Triple, iri, literal, load_ntriples

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
FIXTURE_A = FIXTURES / "fixture-a.nt"

X = "http://x.org/"


def x(name: str):
    return iri(X + name)


TYPE, LABEL = iri(RDF_TYPE), iri(RDFS_LABEL)

# FIXTURE-A triples by name, in file order
MUNICH_TYPE = Triple(x("Munich"), TYPE, x("City"))
BERLIN_TYPE = Triple(x("Berlin"), TYPE, x("City"))
MUNICH_IN = Triple(x("Munich"), x("locatedIn"), x("Germany"))
BERLIN_IN = Triple(x("Berlin"), x("locatedIn"), x("Germany"))
GERMANY_PART = Triple(x("Germany"), x("partOf"), x("Europe"))
GERMANY_LABEL = Triple(x("Germany"), LABEL, literal("Germany"))
MUNICH_LABEL = Triple(x("Munich"), LABEL, literal("Munich"))
EUROPE_NAME = Triple(x("Europe"), x("name"), literal("Europe"))


@pytest.fixture(scope="session")
def fixture_a():
    return load_ntriples(FIXTURE_A)


# ---------------------------------------------------------------- acceptance summary

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        previous = _acceptance.get(name, "PASS")
        _acceptance[name] = "PASS" if report.passed and previous == "PASS" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name]}  {name}")
