import numpy as np
import pytest

from pushpull.graph import Graph, generate

ER_SEED = 2012

_criteria = {}


def star(leaves=4):
    return Graph.from_arcs(leaves + 1, [0] * leaves, list(range(1, leaves + 1)))


def path(n):
    return Graph.from_arcs(n, list(range(n - 1)), list(range(1, n)))


def two_node():
    return Graph.from_arcs(2, [0], [1])


def edgeless(n):
    return Graph.from_arcs(n, [], [])


@pytest.fixture(scope="session")
def er2000():
    return generate("erdos_renyi", 2000, 6001, ER_SEED)


@pytest.fixture(scope="session")
def pa2000():
    return generate("preferential_attachment", 2000, 3, ER_SEED)


@pytest.fixture(scope="session")
def reg2000():
    return generate("regular", 2000, 6, ER_SEED)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = _markers.get(report.nodeid)
    if marker is None:
        return
    num, desc = marker
    status = "PASS" if report.outcome == "passed" else "FAIL"
    prev = _criteria.get(num)
    if prev is None or status == "FAIL":
        _criteria[num] = (status, desc)


_markers = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _markers[item.nodeid] = (m.args[0], m.kwargs.get("desc", item.name))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        status, desc = _criteria[num]
        terminalreporter.write_line(f"criterion {num:>2}: {status}  {desc}")
