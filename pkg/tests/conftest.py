import pytest

from pfaffgrass.census import sample_W


@pytest.fixture(scope="session")
def w2():
    return sample_W(2, 1)


@pytest.fixture(scope="session")
def w3():
    return sample_W(3, 1)


_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        if report.skipped:
            _acceptance.setdefault(name, "SKIP")
        else:
            _acceptance[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if _acceptance:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(_acceptance.items()):
            terminalreporter.write_line(f"{verdict:4}  {name}")
