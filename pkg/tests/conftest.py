import pytest

from gorhom.paperlab import build_scenario
from gorhom.scalar import GF, QQ

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for mark in getattr(report, "criterion_marks", ()):
        ok = report.passed
        prev = _CRITERIA.get(mark, True)
        _CRITERIA[mark] = prev and ok


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep.criterion_marks = tuple(m.args[0] for m in item.iter_markers("criterion"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if _CRITERIA[n] else 'FAIL'}")


@pytest.fixture(scope="session")
def scQ():
    return build_scenario(QQ, 2, 15, 8)


@pytest.fixture(scope="session")
def scF5():
    return build_scenario(GF(5), 2, 20, 10)


@pytest.fixture(scope="session")
def scP():
    """Large prime field for the heavy Betti computations."""
    return build_scenario(GF(32003), 2, 15, 8)
