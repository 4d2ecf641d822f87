import pytest

from bmctree import counterexample_fixture

_acceptance: dict[str, str] = {}


@pytest.fixture(scope="session")
def example():
    """The counter-example tree, measure and published constants."""
    return counterexample_fixture()


@pytest.fixture(scope="session")
def ex_tree(example):
    return example[0]


@pytest.fixture(scope="session")
def ex_measure(example):
    return example[1]


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        doc = report.user_properties and dict(report.user_properties).get("criterion")
        _acceptance[doc or report.nodeid] = report.outcome
    elif report.when == "setup" and report.outcome != "passed" and "acceptance" in report.keywords:
        _acceptance[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
