"""Rule dispatch for witness construction and the size estimator.

For a squared distance ``sq`` the recursion picks one rule:

    BASE  sq = 1
    FIG1  |xy| = 3/2 (unit simplex gadget) or 9/4 (the same scaled by 3/2)
    FIG3  |xy| = 2
    FIG4  |xy| = k, an integer >= 3 (chain of unit and distance-2 links)
    FIG5  |xy| = p/q with q >= 2 (similar triangles over integer distances)
    FIG7  |xy| irrational (right angle with rational legs a, b)
    FIG2  bound set for |xy| = 1/4 (only ever requested as a bound)

:func:`shape` reports a rule's point count and the sub-distances it needs
witnessed, without building coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from ..configs import (
    Config,
    fig1_q8,
    fig2_q8,
    fig3_config,
    fig4_config,
    fig5_layout,
    fig7_layout,
    fig7_params,
)
from ..errors import BadDistance, WrongDistance
from ..exactq import Point, RatLike, as_rat, format_rat, rational_sqrt

RULES = ("BASE", "FIG1", "FIG2", "FIG3", "FIG4", "FIG5", "FIG7")
RULE_CODE = {r: i for i, r in enumerate(RULES)}

ONE = Fraction(1)
BOUND_SQ = Fraction(1, 16)
_THREE_HALVES = Fraction(3, 2)
_NINE_QUARTERS = Fraction(9, 4)


@dataclass(frozen=True)
class Shape:
    rule: str
    params: tuple
    n_points: int
    subs: tuple[tuple[Fraction, bool], ...]


def classify(sq: RatLike, bound: bool = False) -> tuple[str, tuple]:
    sq = as_rat(sq)
    if sq <= 0:
        raise BadDistance(f"squared distance must be positive, got {sq}")
    if bound:
        if sq != BOUND_SQ:
            raise WrongDistance(f"bound sets exist for |xy|^2 = 1/16 only, got {sq}")
        return "FIG2", ()
    if sq == ONE:
        return "BASE", ()
    r = rational_sqrt(sq)
    if r is None:
        return "FIG7", fig7_params(sq)
    if r == _THREE_HALVES:
        return "FIG1", (ONE,)
    if r == _NINE_QUARTERS:
        return "FIG1", (_THREE_HALVES,)
    if r == 2:
        return "FIG3", ()
    if r.denominator == 1:
        return "FIG4", (r.numerator,)
    return "FIG5", (r.numerator, r.denominator)


def shape(sq: RatLike, bound: bool = False) -> Shape:
    return rule_shape(*classify(as_rat(sq), bound))


def rule_shape(rule: str, params: tuple = ()) -> Shape:
    """Shape of an explicit rule application, e.g. ``rule_shape("FIG5", (3, 2))``."""
    if rule == "BASE":
        return Shape(rule, params, 2, ())
    if rule == "FIG1":
        d2 = params[0] ** 2
        return Shape(rule, params, 19, ((d2, False),) * 89)
    if rule == "FIG2":
        return Shape(rule, params, 10, ((ONE, False),) * 16 + ((_NINE_QUARTERS, False),) * 28)
    if rule == "FIG3":
        return Shape(rule, params, 4,
                     ((ONE, False), (ONE, False), (BOUND_SQ, True), (Fraction(81, 16), False)))
    if rule == "FIG4":
        (k,) = params
        return Shape(rule, params, k + 1, ((ONE, False),) * k + ((Fraction(4), False),) * (k - 1))
    if rule == "FIG5":
        p, q = params
        P, Q, R = Fraction(p * p), Fraction((q * p) ** 2), Fraction(((q - 1) * p) ** 2)
        return Shape(rule, params, 5, tuple((v, False) for v in (P, R, P, Q, R, P, Q)))
    a, b = params
    return Shape(rule, params, 4, tuple((v, False) for v in (b * b, b * b, 4 * b * b, a * a, a * a)))


def canonical_config(sq: RatLike, bound: bool = False) -> Config:
    """The rule's configuration anchored at its canonical coordinates."""
    sq = as_rat(sq)
    rule, params = classify(sq, bound)
    if rule == "FIG1":
        return fig1_q8(params[0])
    if rule == "FIG2":
        return fig2_q8()
    if rule == "FIG3":
        return fig3_config()
    if rule == "FIG4":
        return fig4_config(params[0])
    if rule == "FIG5":
        return fig5_layout(*params)
    if rule == "FIG7":
        return fig7_layout(sq)
    raise ValueError("BASE has no configuration")


def base_pair() -> tuple[Point, Point]:
    return Point.zero(8), Point.basis(8, 0)


@dataclass
class SizeEstimate:
    points: int
    unit_edges: int
    rule_counts: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"points": self.points, "unit_edges": self.unit_edges,
                "rule_counts": dict(sorted(self.rule_counts.items()))}


@lru_cache(maxsize=None)
def _estimate(sq: Fraction, bound: bool) -> tuple[int, int, tuple]:
    sh = shape(sq, bound)
    if sh.rule == "BASE":
        return 2, 1, (("BASE", 1),)
    points, edges = sh.n_points, 0
    counts = {sh.rule: 1}
    for sub_sq, sub_bound in sh.subs:
        p, e, c = _estimate(sub_sq, sub_bound)
        points += p - 2
        edges += e
        for rule, n in c:
            counts[rule] = counts.get(rule, 0) + n
    return points, edges, tuple(sorted(counts.items()))


def estimate_size(r2: RatLike, bound: bool = False) -> SizeEstimate:
    """Upper bound on the materialized witness size (ignores coincidence merging)."""
    p, e, c = _estimate(as_rat(r2), bound)
    return SizeEstimate(p, e, dict(c))


def estimate_shape(sh: Shape) -> SizeEstimate:
    """Estimate for an explicit rule shape (lets callers price alternative rules)."""
    points, edges, counts = sh.n_points, 0, {sh.rule: 1}
    for sub_sq, sub_bound in sh.subs:
        est = estimate_size(sub_sq, sub_bound)
        points += est.points - 2
        edges += est.unit_edges
        for rule, n in est.rule_counts.items():
            counts[rule] = counts.get(rule, 0) + n
    return SizeEstimate(points, edges, counts)


def describe(sq: RatLike, bound: bool = False) -> str:
    rule, params = classify(as_rat(sq), bound)
    if not params:
        return rule
    return rule + "(" + ", ".join(format_rat(Fraction(p)) for p in params) + ")"
