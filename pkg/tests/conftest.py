import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: one test per acceptance criterion")


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.failed:
        _criteria[report.nodeid] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_criteria):
        name = nodeid.split("::")[-1].removeprefix("test_criterion_")
        num, _, label = name.partition("_")
        status = "PASS" if _criteria[nodeid] else "FAIL"
        terminalreporter.write_line(f"criterion {num} [{label.replace('_', ' ')}]: {status}")
