import pytest

from qkahler.gw import FormulaBook, StructureEngine

ACCEPTANCE_RESULTS: dict = {}


@pytest.fixture(scope="session")
def formulas():
    return FormulaBook()


@pytest.fixture(scope="session")
def fano(formulas):
    return StructureEngine("fano", formulas)


@pytest.fixture(scope="session")
def virtual(formulas):
    return StructureEngine("virtual", formulas)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, label = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {label}")
