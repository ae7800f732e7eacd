import re

import pytest

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_outcomes: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    n, title = int(m.group(1)), m.group(2).replace("_", " ")
    if report.when == "call" or report.outcome != "passed":
        prev = _outcomes.get(n, (title, "pass"))[1]
        status = "pass" if report.outcome == "passed" and prev == "pass" else "fail"
        if report.outcome == "skipped":
            status = "skipped"
        _outcomes[n] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        title, status = _outcomes[n]
        terminalreporter.write_line(f"criterion {n:2d} ({title}): {status}")


@pytest.fixture(scope="session")
def default_report():
    """The full suite under the default configuration, run once per session."""
    from gstar.suite import SuiteConfig, run_suite

    return run_suite(SuiteConfig())
