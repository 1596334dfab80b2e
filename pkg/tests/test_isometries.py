import random
from fractions import Fraction

import pytest

from unitforce.arith import four_square_rat
from unitforce.configs import fig1_q8
from unitforce.errors import DegenerateMirror, DimMismatch, IncongruentPairs
from unitforce.exactq import Point, sqdist
from unitforce.isometries import IDENTITY, Reflection, apply, reflect_bisector, segment_isometry

from conftest import rand_point

F = Fraction


def test_mirror_swaps_endpoints(rng):
    for _ in range(50):
        A, B = rand_point(rng), rand_point(rng)
        if A == B:
            continue
        assert reflect_bisector(A, B, A) == B
        assert reflect_bisector(A, B, B) == A


def test_fixed_hyperplane():
    A, B = Point.zero(8), Point.basis(8, 0, 2)
    P = Point([1, 5, F(-2, 3), 0, 0, 7, 0, 1])
    assert sqdist(P, A) == sqdist(P, B)
    assert reflect_bisector(A, B, P) == P


def test_degenerate_mirror():
    A = Point.basis(8, 3)
    with pytest.raises(DegenerateMirror):
        reflect_bisector(A, A, Point.zero(8))


def test_dimension_checks():
    with pytest.raises(DimMismatch):
        Reflection(Point.zero(8), Point.basis(3, 0))
    with pytest.raises(DimMismatch):
        Reflection(Point.zero(8), Point.basis(8, 0))(Point.zero(2))


def test_reflected_simplex_fig1():
    # p~_i from the listed p_i by the (y, y~) mirror
    c = fig1_q8(1)
    x, y, yt = c.points["x"], c.points["y"], c.points["y~"]
    for i in range(1, 9):
        pt = reflect_bisector(y, yt, c.points[f"p{i}"])
        assert pt == c.points[f"p~{i}"]
        assert sqdist(x, pt) == 1
        assert sqdist(yt, pt) == 1


def test_identity_case(rng):
    A, B = rand_point(rng), rand_point(rng)
    I = segment_isometry(A, B, A, B)
    assert I.kind == "identity"
    assert apply(IDENTITY, A) == A


def test_single_reflection_case():
    A = Point.zero(8)
    B = Point.basis(8, 0)
    B2 = Point.basis(8, 1)
    I = segment_isometry(A, B, A, B2)
    assert I.kind == "reflection"
    assert I(A) == A and I(B) == B2


def test_incongruent():
    with pytest.raises(IncongruentPairs):
        segment_isometry(Point.zero(8), Point.basis(8, 0), Point.zero(8), Point.basis(8, 0, 2))


def _congruent_pair(rng, A2, sq):
    # B2 = A2 + (k, l, m, n, 0...) permuted, with k^2+l^2+m^2+n^2 = sq
    parts = list(four_square_rat(sq)) + [F(0)] * 4
    rng.shuffle(parts)
    signs = [rng.choice((1, -1)) for _ in parts]
    return A2 + Point([s * p for s, p in zip(signs, parts)])


def test_random_congruent_pairs(rng):
    for _ in range(200):
        A, B = rand_point(rng), rand_point(rng)
        if A == B:
            continue
        A2 = rand_point(rng)
        B2 = _congruent_pair(rng, A2, sqdist(A, B))
        I = segment_isometry(A, B, A2, B2)
        assert apply(I, A) == A2 and apply(I, B) == B2


def test_distance_preservation_and_involution(rng):
    A, B = rand_point(rng), rand_point(rng)
    R = Reflection(A, B)
    pts = [rand_point(rng) for _ in range(40)]
    imgs = [R(p) for p in pts]
    for p, q in zip(pts, imgs):
        assert R(q) == p
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            assert sqdist(imgs[i], imgs[j]) == sqdist(pts[i], pts[j])


def test_composed_isometry_preserves(rng):
    A, B = rand_point(rng), rand_point(rng)
    A2 = rand_point(rng)
    B2 = _congruent_pair(rng, A2, sqdist(A, B))
    I = segment_isometry(A, B, A2, B2)
    pts = [rand_point(rng) for _ in range(25)]
    imgs = I.map_points(pts)
    for i in range(len(pts)):
        # outputs are canonical: equal to a freshly built Point of the same coordinates
        assert Point(imgs[i].coords) == imgs[i]
        for j in range(i):
            assert sqdist(imgs[i], imgs[j]) == sqdist(pts[i], pts[j])
