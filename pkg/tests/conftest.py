import pytest

from setccg.dialogue import DiscourseModel, FactBase
from setccg.lexicon import load_lexicon


@pytest.fixture(scope="session")
def lex():
    return load_lexicon()


@pytest.fixture
def db():
    return FactBase.load()


@pytest.fixture
def dm():
    return DiscourseModel()


# ------------------------------------------------------------ acceptance report

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or "::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::test_criterion_", 1)[1]
        num = int(name.split("_", 1)[0])
        detail = dict(report.user_properties).get("detail", "")
        _CRITERIA[num] = (report.outcome, name.split("_", 1)[1], detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        outcome, name, detail = _CRITERIA[num]
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} [{mark}] {name}: {detail}")
