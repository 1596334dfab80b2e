"""Exact rationals and points of Q^n.

Rationals are :class:`fractions.Fraction` values (always in lowest terms with a
positive denominator).  A :class:`Point` keeps its coordinates as integer
numerators over one common positive denominator, reduced so that the gcd of
all of them is 1.  That form is canonical, hashes cheaply and lets squared
distances be computed with integer arithmetic only.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DimMismatch, RationalSyntax, ZeroDenominator

Rat = Fraction
RatLike = Union[Fraction, int, str]

_RAT_RE = re.compile(r"-?[0-9]+(?:/[0-9]+)?")


def rat(numer: int, denom: int = 1) -> Fraction:
    if denom == 0:
        raise ZeroDenominator(f"{numer}/0")
    return Fraction(numer, denom)


def parse_rat(s: str) -> Fraction:
    """Parse ``-?digits(/digits)?``.  Anything else is rejected."""
    s = s.strip()
    if not _RAT_RE.fullmatch(s):
        raise RationalSyntax(f"not a rational: {s!r}")
    if "/" in s:
        p, q = s.split("/")
        return rat(int(p), int(q))
    return Fraction(int(s))


def format_rat(r: Fraction) -> str:
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def as_rat(v: RatLike) -> Fraction:
    if isinstance(v, str):
        return parse_rat(v)
    if isinstance(v, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return Fraction(v)


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of ``q`` when it is a rational square, else None."""
    if q < 0:
        return None
    p, d = q.numerator, q.denominator
    rp, rd = math.isqrt(p), math.isqrt(d)
    if rp * rp == p and rd * rd == d:
        return Fraction(rp, rd)
    return None


def _normalize(num: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-a for a in num]
        den = -den
    g = math.gcd(den, *num)
    if g > 1:
        return tuple(a // g for a in num), den // g
    return tuple(num), den


class Point:
    """Immutable point of Q^dim."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, coords: Iterable[RatLike]):
        fr = [as_rat(c) for c in coords]
        if not fr:
            raise ValueError("a point needs at least one coordinate")
        den = math.lcm(*(f.denominator for f in fr))
        num = [f.numerator * (den // f.denominator) for f in fr]
        self.num, self.den = _normalize(num, den)
        self._hash = hash((self.num, self.den))

    @classmethod
    def from_ints(cls, num: Sequence[int], den: int = 1) -> "Point":
        if den == 0:
            raise ZeroDenominator("point denominator is zero")
        p = cls.__new__(cls)
        p.num, p.den = _normalize(num, den)
        p._hash = hash((p.num, p.den))
        return p

    @classmethod
    def zero(cls, dim: int) -> "Point":
        return cls.from_ints((0,) * dim, 1)

    @classmethod
    def basis(cls, dim: int, axis: int, scale: RatLike = 1) -> "Point":
        c = [Fraction(0)] * dim
        c[axis] = as_rat(scale)
        return cls(c)

    @property
    def dim(self) -> int:
        return len(self.num)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.den) for a in self.num)

    def __getitem__(self, i: int) -> Fraction:
        return Fraction(self.num[i], self.den)

    def __len__(self) -> int:
        return len(self.num)

    def __iter__(self):
        return iter(self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Point):
            return NotImplemented
        return self.den == other.den and self.num == other.num

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "Point([" + ", ".join(format_rat(c) for c in self.coords) + "])"

    def _check(self, other: "Point") -> None:
        if len(self.num) != len(other.num):
            raise DimMismatch(f"dimensions {len(self.num)} and {len(other.num)}")

    def __add__(self, other: "Point") -> "Point":
        self._check(other)
        d1, d2 = self.den, other.den
        return Point.from_ints([a * d2 + b * d1 for a, b in zip(self.num, other.num)], d1 * d2)

    def __sub__(self, other: "Point") -> "Point":
        self._check(other)
        d1, d2 = self.den, other.den
        return Point.from_ints([a * d2 - b * d1 for a, b in zip(self.num, other.num)], d1 * d2)

    def scale(self, t: RatLike) -> "Point":
        t = as_rat(t)
        return Point.from_ints([a * t.numerator for a in self.num], self.den * t.denominator)

    __mul__ = scale
    __rmul__ = scale

    def dot(self, other: "Point") -> Fraction:
        self._check(other)
        s = sum(a * b for a, b in zip(self.num, other.num))
        return Fraction(s, self.den * other.den)

    def to_floats(self) -> list[float]:
        return [a / self.den for a in self.num]

    def to_json(self) -> list[str]:
        return [format_rat(c) for c in self.coords]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Point":
        if not isinstance(data, (list, tuple)):
            raise RationalSyntax("a point must be a JSON array of rational strings")
        return cls(parse_rat(str(s)) for s in data)


def sqdist_ints(num1, den1, num2, den2) -> tuple[int, int]:
    """Squared distance as an (unreduced) integer pair (numerator, denominator)."""
    s = 0
    for a, b in zip(num1, num2):
        t = a * den2 - b * den1
        s += t * t
    d = den1 * den2
    return s, d * d


def sqdist(P: Point, Q: Point) -> Fraction:
    P._check(Q)
    s, d = sqdist_ints(P.num, P.den, Q.num, Q.den)
    return Fraction(s, d)


def affine(P: Point, Q: Point, t: RatLike) -> Point:
    """P + t (Q - P)."""
    P._check(Q)
    t = as_rat(t)
    tn, td = t.numerator, t.denominator
    d1, d2 = P.den, Q.den
    return Point.from_ints(
        [a * d2 * td + tn * (b * d1 - a * d2) for a, b in zip(P.num, Q.num)], d1 * d2 * td
    )


def midpoint(P: Point, Q: Point) -> Point:
    return affine(P, Q, Fraction(1, 2))
