import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from unitforce.errors import DimMismatch, RationalSyntax, ZeroDenominator
from unitforce.exactq import (Point, affine, as_rat, format_rat, midpoint, parse_rat, rat,
                              rational_sqrt, sqdist)

from conftest import rand_point

F = Fraction
rats = st.fractions(max_denominator=10**6).filter(lambda r: abs(r) < 10**9)


def fig1_y(s=1):
    return Point([F(3, 8) * s * c for c in (-3, 0, 0, 0, 1, 1, 1, -2)])


def test_rat_normalization():
    assert rat(6, 4) == F(3, 2)
    r = rat(3, -2)
    assert r == F(-3, 2) and r.denominator == 2
    z = rat(0, 7)
    assert z.numerator == 0 and z.denominator == 1


def test_rat_zero_denominator():
    with pytest.raises(ZeroDenominator):
        rat(1, 0)


@pytest.mark.parametrize("text,value", [("3/2", F(3, 2)), ("-7", F(-7)), ("0", F(0)), ("10/4", F(5, 2))])
def test_parse(text, value):
    assert parse_rat(text) == value


@pytest.mark.parametrize("bad", ["", "1.5", "1/", "/2", "a", "1 /2", "--1", "1/-2"])
def test_parse_rejects(bad):
    with pytest.raises(RationalSyntax):
        parse_rat(bad)


def test_parse_zero_denominator():
    with pytest.raises(ZeroDenominator):
        parse_rat("1/0")


def test_format():
    assert format_rat(F(3, 1)) == "3"
    assert format_rat(F(-6, 4)) == "-3/2"


@given(rats)
def test_format_round_trip(r):
    assert parse_rat(format_rat(r)) == r


def test_as_rat_rejects_floats():
    with pytest.raises(TypeError):
        as_rat(0.5)
    assert as_rat("1/3") == F(1, 3)
    assert as_rat(2) == F(2)


def test_rational_sqrt():
    assert rational_sqrt(F(9, 4)) == F(3, 2)
    assert rational_sqrt(F(2)) is None
    assert rational_sqrt(F(0)) == 0
    assert rational_sqrt(F(-1)) is None


def test_sqdist_fig1_anchor():
    x = Point.zero(8)
    y = fig1_y()
    assert sqdist(x, x) == 0
    assert sqdist(x, y) == F(9, 4)


def test_sqdist_dim_mismatch():
    with pytest.raises(DimMismatch):
        sqdist(Point.zero(8), Point.zero(3))


def test_affine_endpoints_and_scaling():
    x, y = Point.zero(8), Point.basis(8, 0, 2)
    assert affine(x, y, 0) == x
    assert affine(x, y, 1) == y
    t = affine(x, y, F(9, 8))
    assert sqdist(x, t) == F(81, 16)
    assert midpoint(x, y) == Point.basis(8, 0)


def test_point_canonical_storage():
    p = Point([F(1, 2), F(1, 3), F(0)])
    q = Point.from_ints((3, 2, 0), 6)
    assert p == q and hash(p) == hash(q)
    assert p.den == 6
    assert Point.from_json(p.to_json()) == p
    assert p.to_json() == ["1/2", "1/3", "0"]


def test_point_arithmetic():
    p = Point([1, 2, 3])
    q = Point([F(1, 2), 0, -1])
    assert p + q == Point([F(3, 2), 2, 2])
    assert p - q == Point([F(1, 2), 2, 4])
    assert p.scale(F(1, 3)) == Point([F(1, 3), F(2, 3), 1])
    assert p.dot(q) == F(1, 2) - 3


def test_symmetry_and_identity_random():
    rng = random.Random(7)
    for _ in range(300):
        P, Q = rand_point(rng), rand_point(rng)
        assert sqdist(P, Q) == sqdist(Q, P)
        assert (sqdist(P, Q) == 0) == (P == Q)


@given(st.lists(rats, min_size=8, max_size=8), st.lists(rats, min_size=8, max_size=8), rats)
def test_affine_scales_sqdist(a, b, t):
    P, Q = Point(a), Point(b)
    assert sqdist(P, affine(P, Q, t)) == t * t * sqdist(P, Q)
