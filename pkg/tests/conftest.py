from pathlib import Path

import pytest

from orient_rr.graph_core import Divisor, Multigraph, load_graph

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "orient_rr" / "fixtures"


def fixture_graph(name):
    return load_graph((FIXTURES / f"{name}.graph").read_text())


def div(graph, *values):
    return Divisor(graph, tuple(values))


@pytest.fixture
def c3():
    return fixture_graph("c3")


@pytest.fixture
def b3():
    return fixture_graph("b3")


@pytest.fixture
def k4():
    return fixture_graph("k4")


@pytest.fixture
def pendant():
    # triangle b-c-d with a pendant vertex a attached at b
    return Multigraph.from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "b")])


# -- acceptance reporting: one line per criterion --------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, limit): acceptance criterion with a time limit in seconds")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criteria[item.nodeid] = {"number": mark.args[0], "title": mark.args[1], "outcome": "NOT RUN"}


def pytest_runtest_logreport(report):
    row = _criteria.get(report.nodeid)
    if row is None:
        return
    if report.when == "call" or report.outcome == "failed":
        row["outcome"] = "PASS" if report.passed else "FAIL"
        row["seconds"] = report.duration


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for row in sorted(_criteria.values(), key=lambda r: r["number"]):
        took = f" ({row['seconds']:.1f}s)" if "seconds" in row else ""
        terminalreporter.write_line(f"criterion {row['number']}: {row['outcome']}  {row['title']}{took}")
