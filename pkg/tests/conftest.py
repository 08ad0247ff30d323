from pathlib import Path

import pytest

from idealclose.family import FamilyTerm, ParametricFamily
from idealclose.polyring import RingContext

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"

_criteria = {}


def linear_family(variables, params, terms):
    """terms: (coefficient, exponent matrix rows per variable, offsets); the
    coefficient is an int or a callable on the parameter generators."""
    R = RingContext(variables)
    P = RingContext(params)
    out = []
    for coef, matrix, offset in terms:
        c = coef(*P.gens) if callable(coef) else P.constant(coef)
        out.append(FamilyTerm(c, matrix, offset))
    return ParametricFamily(R, params, out)


@pytest.fixture
def record_criterion():
    def record(name, passed, detail=""):
        _criteria[name] = (passed, detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        passed, detail = _criteria[name]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
