import sys
from functools import lru_cache

import pytest

from pauli_dla.catalog import FamilyId, ModelSpec
from pauli_dla.dla import close
from pauli_dla.pauli import parse


@lru_cache(maxsize=None)
def family_basis(family: str, n: int, topology: str = "open"):
    return close(ModelSpec(FamilyId.parse(family), n, topology).generators())


def strings(text: str):
    return [parse(t) for t in text.replace(" ", "").split(",")]


def string_set(basis) -> set[str]:
    return {str(p) for p in basis}


@pytest.fixture
def fam():
    return family_basis


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
