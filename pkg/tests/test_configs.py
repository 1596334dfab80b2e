import random
from fractions import Fraction
from itertools import combinations

import pytest

from unitforce.configs import (fig1_q8, fig2_q8, fig3_config, fig3_layout, fig4_chain, fig4_config,
                               fig5_layout, fig7_layout, fig7_params, validate)
from unitforce.errors import BadDistance, BadParameter, BadScale, DegenerateHalf, WrongDistance
from unitforce.exactq import Point, sqdist

from conftest import rand_point

F = Fraction

# coordinates as printed for Figure 1 (d = 1), before scaling
FIG1_LISTED = {
    "x": [0] * 8,
    "y": [F(3, 8) * c for c in (-3, 0, 0, 0, 1, 1, 1, -2)],
}


def test_fig1_anchor_and_counts():
    c = fig1_q8(1)
    assert c.points["x"] == Point(FIG1_LISTED["x"])
    assert c.points["y"] == Point(FIG1_LISTED["y"])
    rep = validate(c)
    assert rep.ok
    assert len(c.claims) == 1 + 8 + 8 + 28 + 8 + 8 + 28 == 89
    assert all(cl.sqdist == 1 for cl in c.claims)
    assert sqdist(c.points["x"], c.points["y"]) == F(9, 4)
    assert sqdist(c.points["x"], c.points["y~"]) == F(9, 4)
    assert sqdist(c.points["y"], c.points["y~"]) == 1
    assert len(c.points) == 19


def test_fig1_unit_pairs_are_exactly_the_claims():
    # every pair at distance d among the 19 points is claimed, and nothing else
    c = fig1_q8(1)
    unit = {frozenset((a, b)) for a, b in combinations(c.points, 2)
            if sqdist(c.points[a], c.points[b]) == 1}
    assert unit == {frozenset((cl.a, cl.b)) for cl in c.claims}


def test_fig1_scaled():
    base, big = fig1_q8(1), fig1_q8(F(3, 2))
    assert validate(big).ok
    assert sqdist(big.points["x"], big.points["y"]) == F(81, 16)
    for label, p in base.points.items():
        assert big.points[label] == p.scale(F(3, 2))


def test_fig1_bad_scale():
    for s in (0, -1):
        with pytest.raises(BadScale):
            fig1_q8(s)


def test_fig2_anchor():
    c = fig2_q8()
    x = Point([F(-3, 4), 0, 0, 0, F(1, 4), F(1, 4), F(1, 4), F(-1, 2)])
    y = Point([F(-15, 16), 0, 0, 0, F(5, 16), F(5, 16), F(5, 16), F(-5, 8)])
    p1 = Point([F(-3, 2)] + [0] * 7)
    p2 = Point([F(-3, 4), F(3, 4), 0, 0, 0, 0, F(3, 4), F(-3, 4)])
    assert c.points["x"] == x and c.points["y"] == y
    assert c.points["p1"] == p1 and c.points["p2"] == p2
    assert sqdist(x, y) == F(1, 16)
    assert sqdist(p1, p2) == F(9, 4)
    rep = validate(c)
    assert rep.ok and len(rep.checks) == 8 + 8 + 28 + 1
    assert len(c.points) == 10
    assert c.target_bound


def test_fig3_axis_case():
    x, y = Point.zero(8), Point.basis(8, 0, 2)
    s, t = fig3_layout(x, y)
    assert s == Point.basis(8, 0) and t == Point.basis(8, 0, F(9, 4))


def test_fig3_random(rng):
    from unitforce.arith import four_square_rat
    for _ in range(20):
        x = rand_point(rng)
        y = x + Point(list(four_square_rat(F(4))) + [0] * 4)
        s, t = fig3_layout(x, y)
        assert sqdist(y, t) == F(1, 16)
        assert sqdist(x, t) == F(81, 16)
        assert sqdist(x, s) == 1 == sqdist(s, y)
    assert validate(fig3_config()).ok


def test_fig3_wrong_distance():
    with pytest.raises(WrongDistance):
        fig3_layout(Point.zero(8), Point.basis(8, 0))


def test_fig4_chain():
    x = Point.zero(8)
    assert fig4_chain(x, Point.basis(8, 0), 1) == [x, Point.basis(8, 0)]
    assert fig4_chain(x, Point.basis(8, 0, 3), 3) == [Point.basis(8, 0, k) for k in range(4)]
    rng = random.Random(5)
    for _ in range(10):
        a = rand_point(rng)
        b = a + Point([3, 4, 0, 0, 0, 0, 0, 0])
        ws = fig4_chain(a, b, 5)
        assert len(ws) == 6
        for i in range(6):
            for j in range(i + 1, 6):
                assert sqdist(ws[i], ws[j]) == (j - i) ** 2
    assert validate(fig4_config(5)).ok
    with pytest.raises(WrongDistance):
        fig4_chain(x, Point.basis(8, 0, 2), 3)
    with pytest.raises(BadParameter):
        fig4_chain(x, x, 0)


@pytest.mark.parametrize("p,q,sq", [(1, 2, F(1, 4)), (7, 4, F(49, 16)), (3, 2, F(9, 4)), (2, 5, F(4, 25))])
def test_fig5(p, q, sq):
    c = fig5_layout(p, q)
    assert validate(c).ok
    assert sqdist(c.points["x"], c.points["y"]) == sq
    assert len(c.claims) == 7


def test_fig5_guard():
    with pytest.raises(BadParameter):
        fig5_layout(3, 1)


def test_fig7_params():
    assert fig7_params(2) == (F(9, 4), F(7, 4))
    assert fig7_params(1) == (F(5, 4), F(3, 4))
    with pytest.raises(DegenerateHalf):
        fig7_params(F(1, 4))
    with pytest.raises(BadDistance):
        fig7_params(0)
    with pytest.raises(BadDistance):
        fig7_params(-1)


def test_fig7_random():
    rng = random.Random(11)
    for _ in range(1000):
        r2 = F(rng.randrange(1, 10**4), rng.randrange(1, 10**4))
        if r2 == F(1, 4):
            continue
        a, b = fig7_params(r2)
        assert a * a - b * b == r2
    for r2 in (F(2), F(3), F(5, 7), F(49, 16) + 1):
        c = fig7_layout(r2)
        assert validate(c).ok
        assert sqdist(c.points["x"], c.points["y"]) == r2


def test_validate_fault_injection():
    c = fig1_q8(1)
    p = c.points["p3"]
    c.points["p3"] = p + Point([F(1, 10**9)] + [0] * 7)
    rep = validate(c)
    touching = {cl for cl in c.all_claims() if "p3" in (cl.a, cl.b)}
    assert {chk.claim for chk in rep.failures} == touching
    assert not rep.ok


def test_config_json():
    d = fig2_q8().to_json()
    assert d["schema"] == 1
    assert len(d["points"]) == 10
    assert d["target"] == ["x", "y", "1/16"]
    assert d["target_bound"] is True
