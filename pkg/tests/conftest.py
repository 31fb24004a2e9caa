from pathlib import Path

import pytest

from closedctmc import parse_model

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "closedctmc" / "fixtures"
DATA = Path(__file__).resolve().parent / "data"


def load(name):
    return parse_model((FIXTURES / name).read_text())


@pytest.fixture
def onoff():
    return load("onoff.ctmc")


@pytest.fixture
def fig3():
    return load("fig3.ctmc")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
