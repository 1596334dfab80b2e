import random
from fractions import Fraction

import pytest

from unitforce.exactq import Point

DIM = 8


def rand_rat(rng: random.Random, span: int = 20, den: int = 12) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def rand_point(rng: random.Random, dim: int = DIM, **kw) -> Point:
    return Point([rand_rat(rng, **kw) for _ in range(dim)])


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
