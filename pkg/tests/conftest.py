import random

import pytest

from e0struct.curve import compute_invariants

E2 = ((0, 0, -2, 0, -2), 2, (1, 1))
E3 = ((0, -3, 0, 3, 0), 3, (1, 1))
E5 = ((0, 20, -5, -15, 0), 5, (1, -1))
E7 = ((7, 0, -28, 7, -35), 7, (2, 1))
EXAMPLES = {"E2": E2, "E3": E3, "E5": E5, "E7": E7}

_acceptance_lines: dict[int, str] = {}


@pytest.fixture
def rng():
    return random.Random(20261016)


@pytest.fixture(params=sorted(EXAMPLES))
def example(request):
    a, p, point = EXAMPLES[request.param]
    return compute_invariants(a, p), point


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion and return the verdict."""

    def record(number: int, passed: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        _acceptance_lines[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_acceptance_lines):
            terminalreporter.write_line(_acceptance_lines[number])
