import pytest

from logenriques.enumeration import enumerate_catalog
from logenriques.models import ModelCase


@pytest.fixture(scope="session")
def catalogs():
    """Full catalogs for both cases; computing one also cross-checks the two
    validity criteria on every subset (is_valid_surface asserts they agree)."""
    return {case: enumerate_catalog(case) for case in ModelCase}


@pytest.fixture(scope="session")
def valid_sets(catalogs):
    return {case: [r.valid for r in recs] for case, recs in catalogs.items()}


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for an acceptance criterion."""

    def record(number: int, title: str, passed: bool, detail: str = ""):
        line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
