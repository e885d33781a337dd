import time

import pytest

from latvac.io import shipped_lattice

_CRITERIA: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        n, title = mark.args
        status = "FAIL" if outcome.excinfo is not None else "PASS"
        _CRITERIA[n] = (title, status, time.perf_counter() - start)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, status, secs = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d} {status}  {title}  ({secs:.1f} s)")


@pytest.fixture(scope="session")
def e8():
    return shipped_lattice("e8")


@pytest.fixture(scope="session")
def e8e8():
    return shipped_lattice("e8e8")


@pytest.fixture(scope="session")
def d16plus():
    return shipped_lattice("d16plus")


@pytest.fixture(scope="session")
def leech():
    return shipped_lattice("leech")


@pytest.fixture(scope="session")
def a1():
    return shipped_lattice("a1")
