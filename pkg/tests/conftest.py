from fractions import Fraction

import pytest

GAMMAS = [Fraction(1, 3), Fraction(3, 5), Fraction(5, 7), Fraction(1), Fraction(7, 5), Fraction(5, 3)]
ODD_N = list(range(3, 32, 2))


@pytest.fixture
def n3_gamma13():
    return 3, Fraction(1, 3)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
