"""Rigorous interval enclosures of expression values with rational endpoints.

Endpoints are rounded outward to a working precision after every operation,
which keeps the rationals small; the working precision is doubled until the
requested width is met.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import BadParameter, DomainError
from .expr import Bin, Expr, Num, Sqrt

_ZERO = Fraction(0)
_MAX_WORKING = 1 << 16


class _Straddle(Exception):
    """A divisor interval contains zero at the current working precision."""


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, other: "Interval | Fraction") -> bool:
        if isinstance(other, Interval):
            return self.lo <= other.lo and other.hi <= self.hi
        return self.lo <= other <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def magnitude(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def to_floats(self) -> tuple[float, float]:
        return float(self.lo), float(self.hi)

    def __repr__(self) -> str:
        return f"Interval[{float(self.lo)!r}, {float(self.hi)!r}]"


def point(v: Fraction) -> Interval:
    return Interval(v, v)


def _log2(x: Fraction) -> int:
    return x.numerator.bit_length() - x.denominator.bit_length()


def round_down(x: Fraction, w: int) -> Fraction:
    if x == 0 or x.denominator & (x.denominator - 1) == 0 and x.numerator.bit_length() <= w:
        return x
    shift = w - _log2(abs(x))
    if shift >= 0:
        return Fraction((x.numerator << shift) // x.denominator, 1 << shift)
    return Fraction(x.numerator // (x.denominator << -shift) << -shift)


def round_up(x: Fraction, w: int) -> Fraction:
    return -round_down(-x, w)


def _out(lo: Fraction, hi: Fraction, w: int) -> Interval:
    return Interval(round_down(lo, w), round_up(hi, w))


def sqrt_down(x: Fraction, w: int) -> Fraction:
    if x <= 0:
        return _ZERO
    k = max(0, w - _log2(x) // 2)
    s = math.isqrt((x.numerator << (2 * k)) // x.denominator)
    return Fraction(s, 1 << k)


def sqrt_up(x: Fraction, w: int) -> Fraction:
    if x <= 0:
        return _ZERO
    k = max(0, w - _log2(x) // 2)
    m = -((-x.numerator << (2 * k)) // x.denominator)   # ceil(x * 4^k)
    t = math.isqrt(m)
    if t * t < m:
        t += 1
    return Fraction(t, 1 << k)


def add(a: Interval, b: Interval, w: int) -> Interval:
    return _out(a.lo + b.lo, a.hi + b.hi, w)


def sub(a: Interval, b: Interval, w: int) -> Interval:
    return _out(a.lo - b.hi, a.hi - b.lo, w)


def mul(a: Interval, b: Interval, w: int) -> Interval:
    ps = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return _out(min(ps), max(ps), w)


def div(a: Interval, b: Interval, w: int) -> Interval:
    if b.lo == 0 == b.hi:
        raise DomainError("division by zero")
    if b.lo <= 0 <= b.hi:
        raise _Straddle()
    return mul(a, _out(1 / b.hi, 1 / b.lo, w), w)


def sqrt(a: Interval, w: int) -> Interval:
    if a.hi < 0:
        raise DomainError("square root of a negative value")
    return Interval(sqrt_down(max(a.lo, _ZERO), w), sqrt_up(a.hi, w))


_OPS = {"+": add, "-": sub, "*": mul, "/": div}


def eval_at(e: Expr, w: int, memo: dict | None = None) -> Interval:
    """Enclosure at fixed working precision ``w`` (no width guarantee)."""
    if memo is None:
        memo = {}
    # iterative post-order: derivation values are deep DAGs
    stack = [e]
    while stack:
        x = stack[-1]
        if id(x) in memo:
            stack.pop()
            continue
        if isinstance(x, Num):
            memo[id(x)] = point(x.value)
            stack.pop()
        elif isinstance(x, Sqrt):
            a = memo.get(id(x.arg))
            if a is None:
                stack.append(x.arg)
                continue
            memo[id(x)] = sqrt(a, w)
            stack.pop()
        else:
            a, b = memo.get(id(x.left)), memo.get(id(x.right))
            if a is None or b is None:
                if a is None:
                    stack.append(x.left)
                if b is None:
                    stack.append(x.right)
                continue
            memo[id(x)] = _OPS[x.op](a, b, w)
            stack.pop()
    return memo[id(e)]


def _target_width(iv: Interval, bits: int) -> Fraction:
    return Fraction(2) ** (1 - bits) * max(Fraction(1), iv.magnitude())


def eval_interval(e: Expr, bits: int = 64) -> Interval:
    """Enclosure of ``e`` with width at most 2^(1-bits) * max(1, |value|)."""
    if bits < 16:
        raise BadParameter(f"bits must be >= 16, got {bits}")
    w = bits + 16
    last = None
    while w <= _MAX_WORKING:
        try:
            iv = eval_at(e, w)
        except _Straddle:
            w *= 2
            continue
        if iv.width <= _target_width(iv, bits):
            return iv
        last = iv
        w *= 2
    if last is None:
        raise DomainError("division by a value indistinguishable from zero")
    return last


def sign(e: Expr, max_bits: int = 4096) -> int:
    """-1, 0 or 1; 0 when the enclosure still straddles zero at ``max_bits``."""
    w = 64
    while w <= max_bits:
        try:
            iv = eval_at(e, w)
        except _Straddle:
            w *= 2
            continue
        if iv.lo > 0:
            return 1
        if iv.hi < 0:
            return -1
        if iv.lo == 0 == iv.hi:
            return 0
        w *= 2
    return 0
