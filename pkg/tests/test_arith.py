import math
import random
from fractions import Fraction

import pytest

from unitforce.arith import four_square_int, four_square_rat, isoceles_triangle
from unitforce.errors import NegativeInput, TriangleInequality
from unitforce.exactq import sqdist

F = Fraction


def brute_lex_largest(N):
    # independent oracle: first hit in descending lexicographic order
    r = math.isqrt(N)
    for k in range(r, -1, -1):
        for l in range(min(k, math.isqrt(N - k * k)), -1, -1):
            for m in range(min(l, math.isqrt(N - k * k - l * l)), -1, -1):
                rest = N - k * k - l * l - m * m
                n = math.isqrt(rest)
                if n * n == rest and n <= m:
                    return (k, l, m, n)


def test_small_values():
    assert four_square_int(0) == (0, 0, 0, 0)
    assert four_square_int(7) == (2, 1, 1, 1)


def test_matches_brute_force_below_300():
    for N in range(300):
        assert four_square_int(N) == brute_lex_largest(N), N


def test_sums_exhaustive():
    for N in range(10001):
        k, l, m, n = four_square_int(N)
        assert k * k + l * l + m * m + n * n == N


def test_large_value():
    N = 10**12 + 39
    k, l, m, n = four_square_int(N)
    assert k * k + l * l + m * m + n * n == N


def test_negative():
    with pytest.raises(NegativeInput):
        four_square_int(-1)
    with pytest.raises(NegativeInput):
        four_square_rat(F(-1, 2))


def test_rational_examples():
    assert tuple(four_square_rat(F(0))) == (0, 0, 0, 0)
    assert four_square_rat(F(3, 4)).total() == F(3, 4)
    assert four_square_rat(F(2)).total() == 2


def test_rational_random():
    rng = random.Random(3)
    for _ in range(1000):
        q = F(rng.randrange(0, 10**6), rng.randrange(1, 10**6))
        assert sum(v * v for v in four_square_rat(q)) == q


@pytest.mark.parametrize("b,a", [(F(1), F(1)), (F(1), F(4)), (F(2) - F(1, 1000), F(1)), (F(7, 4), F(9, 4))])
def test_isoceles(b, a):
    L, R, apex = isoceles_triangle(b, a)
    assert sqdist(L, R) == b * b
    assert sqdist(L, apex) == a * a == sqdist(R, apex)
    assert all(c == 0 for c in apex.coords[5:])
    assert apex[0] == 0


def test_isoceles_unit_apex():
    _, _, apex = isoceles_triangle(1, 1)
    assert sum(c * c for c in apex.coords[1:5]) == F(3, 4)


@pytest.mark.parametrize("b,a", [(0, 1), (2, 1), (3, 1), (-1, 1)])
def test_isoceles_rejects(b, a):
    with pytest.raises(TriangleInequality):
        isoceles_triangle(b, a)
