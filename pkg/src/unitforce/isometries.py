"""Reflections across perpendicular bisectors and pair-to-pair isometries of Q^n.

The reflection swapping two distinct rational points A, B is

    P  ->  P - 2 ((P - M).u / u.u) u,     u = B - A,  M = (A + B) / 2,

which only involves rational operations, so rational points stay rational.
Isometries are kept as mirror data and applied with integer arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateMirror, DimMismatch, IncongruentPairs
from .exactq import Point, _normalize, sqdist


class Reflection:
    __slots__ = ("axisA", "axisB", "_u", "_uu", "_cn", "_cd")

    def __init__(self, A: Point, B: Point):
        if A.dim != B.dim:
            raise DimMismatch(f"dimensions {A.dim} and {B.dim}")
        if A == B:
            raise DegenerateMirror("mirror endpoints coincide")
        self.axisA, self.axisB = A, B
        # only the direction of u matters, so use the primitive integer vector
        u = (B - A).num
        mid = (A + B).scale(Fraction(1, 2))
        c = mid.dot(Point.from_ints(u, 1))
        self._u = u
        self._uu = sum(x * x for x in u)
        self._cn, self._cd = c.numerator, c.denominator

    @property
    def dim(self) -> int:
        return len(self._u)

    def apply_ints(self, num: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
        u, uu, cn, cd = self._u, self._uu, self._cn, self._cd
        au = 0
        for a, x in zip(num, u):
            au += a * x
        coef = 2 * (au * cd - cn * den)
        k = cd * uu
        return _normalize([a * k - coef * x for a, x in zip(num, u)], den * k)

    def __call__(self, P: Point) -> Point:
        if P.dim != self.dim:
            raise DimMismatch(f"dimensions {P.dim} and {self.dim}")
        q = Point.__new__(Point)
        q.num, q.den = self.apply_ints(P.num, P.den)
        q._hash = hash((q.num, q.den))
        return q

    def __repr__(self) -> str:
        return f"Reflection({self.axisA!r}, {self.axisB!r})"


def reflect_bisector(A: Point, B: Point, P: Point) -> Point:
    return Reflection(A, B)(P)


@dataclass(frozen=True)
class Isometry:
    """Identity, one reflection, or a composition of two (applied in order)."""

    reflections: tuple[Reflection, ...] = ()

    @property
    def kind(self) -> str:
        return ("identity", "reflection", "composition")[min(len(self.reflections), 2)]

    def __call__(self, P: Point) -> Point:
        for r in self.reflections:
            P = r(P)
        return P

    def apply_ints(self, num, den):
        for r in self.reflections:
            num, den = r.apply_ints(num, den)
        return num, den

    def map_points(self, points: Iterable[Point]) -> list[Point]:
        return [self(p) for p in points]


IDENTITY = Isometry()


def apply(I: Isometry, P: Point) -> Point:
    return I(P)


def segment_isometry(A: Point, B: Point, A2: Point, B2: Point) -> Isometry:
    """An isometry of Q^n taking A -> A2 and B -> B2, built from at most two mirrors."""
    if sqdist(A, B) != sqdist(A2, B2):
        raise IncongruentPairs(f"|AB|^2 = {sqdist(A, B)} but |A2B2|^2 = {sqdist(A2, B2)}")
    if A == A2:
        if B == B2:
            return IDENTITY
        return Isometry((Reflection(B, B2),))
    first = Reflection(A, A2)
    B1 = first(B)
    if B1 == B2:
        return Isometry((first,))
    # |A2 B1| = |A2 B2|, so the second mirror fixes A2
    return Isometry((first, Reflection(B1, B2)))
