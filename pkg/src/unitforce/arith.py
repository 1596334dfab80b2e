"""Four-square decompositions and rational isoceles triangles in Q^8."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NegativeInput, TriangleInequality
from .exactq import Point, RatLike, as_rat


@dataclass(frozen=True)
class FourSquare:
    k: Fraction
    l: Fraction
    m: Fraction
    n: Fraction

    def __iter__(self):
        return iter((self.k, self.l, self.m, self.n))

    def total(self) -> Fraction:
        return self.k**2 + self.l**2 + self.m**2 + self.n**2


def _two_squares(N: int, cap: int):
    # largest m <= cap with N - m^2 a square <= m^2
    m = min(cap, math.isqrt(N))
    while m * m * 2 >= N:
        r = N - m * m
        s = math.isqrt(r)
        if s * s == r:
            return m, s
        m -= 1
    return None


def _three_squares(N: int, cap: int):
    l = min(cap, math.isqrt(N))
    while 3 * l * l >= N:
        rest = _two_squares(N - l * l, l)
        if rest is not None:
            return (l,) + rest
        l -= 1
    return None


def _not_three_squares(N: int) -> bool:
    # Legendre: N is not a sum of three squares iff N = 4^a (8b + 7)
    if N == 0:
        return False
    while N % 4 == 0:
        N //= 4
    return N % 8 == 7


def four_square_int(N: int) -> tuple[int, int, int, int]:
    """Lexicographically largest (k, l, m, n), k >= l >= m >= n >= 0, with squares summing to N.

    Greedy descent on the largest square with backtracking.  The outer loop
    rarely moves more than a few steps below isqrt(N), and each inner two-square
    search costs O(sqrt(N - k^2)), so inputs up to ~1e12 stay fast.
    """
    if N < 0:
        raise NegativeInput(f"{N} < 0")
    if N == 0:
        return (0, 0, 0, 0)
    k = math.isqrt(N)
    while 4 * k * k >= N:
        rem = N - k * k
        if not _not_three_squares(rem):
            rest = _three_squares(rem, k)
            if rest is not None:
                return (k,) + rest
        k -= 1
    raise AssertionError(f"no four-square decomposition found for {N}")  # unreachable


def four_square_rat(q: RatLike) -> FourSquare:
    """Rationals k, l, m, n with k^2 + l^2 + m^2 + n^2 = q, via q = (p s) / s^2."""
    q = as_rat(q)
    if q < 0:
        raise NegativeInput(f"{q} < 0")
    p, s = q.numerator, q.denominator
    parts = four_square_int(p * s)
    return FourSquare(*(Fraction(v, s) for v in parts))


def isoceles_triangle(b: RatLike, a: RatLike) -> tuple[Point, Point, Point]:
    """Three points of Q^8 with sides b, a, a: base endpoints first, apex last."""
    b, a = as_rat(b), as_rat(a)
    if b <= 0 or b >= 2 * a:
        raise TriangleInequality(f"need 0 < b < 2a, got b={b}, a={a}")
    k, l, m, n = four_square_rat(a * a - b * b / 4)
    zero = Fraction(0)
    left = Point([-b / 2] + [zero] * 7)
    right = Point([b / 2] + [zero] * 7)
    apex = Point([zero, k, l, m, n, zero, zero, zero])
    return left, right, apex
