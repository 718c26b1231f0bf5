import pytest

from cbdl.frontend import load_ontology
from cbdl.samples import ONTO2

ACCEPTANCE_LINES: list = []


@pytest.fixture
def onto2():
    return load_ontology(ONTO2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
