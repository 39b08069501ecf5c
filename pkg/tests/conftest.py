import re

import pytest

ACCEPTANCE_TITLES = {
    1: "cyclic sweep",
    2: "dihedral sweep",
    3: "polyhedral chain",
    4: "dihedral automorphisms",
    5: "kernel sanity",
    6: "completeness oracle",
    7: "determinism",
    8: "property suites",
}

_acceptance: dict[int, list[str]] = {}


def pytest_addoption(parser):
    parser.addoption("--update-golden", action="store_true", help="rewrite golden report fixtures")


@pytest.fixture(scope="session")
def update_golden(request):
    return request.config.getoption("--update-golden")


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if m and (report.when == "call" or report.outcome != "passed"):
        _acceptance.setdefault(int(m.group(1)), []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for k, title in ACCEPTANCE_TITLES.items():
        outcomes = _acceptance.get(k)
        if outcomes is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {k} ({title}): {status}")
