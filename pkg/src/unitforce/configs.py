"""Canonical Q^8 configurations and exact validation of their distance claims.

Each :class:`Config` lists named points and the pairs whose distances have to
be witnessed (``claims``).  The pair the configuration forces is ``target``;
``extra`` holds further consequences that are checked but not witnessed.
A claim with ``bound=True`` is witnessed by a bound set (upper bound only).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .arith import four_square_rat, isoceles_triangle
from .errors import BadDistance, BadParameter, BadScale, DegenerateHalf, WrongDistance
from .exactq import Point, RatLike, affine, as_rat, format_rat, sqdist
from .isometries import reflect_bisector

DIM = 8


@dataclass(frozen=True)
class Claim:
    a: str
    b: str
    sqdist: Fraction
    bound: bool = False

    def to_json(self) -> list:
        out = [self.a, self.b, format_rat(self.sqdist)]
        if self.bound:
            out.append("bound")
        return out


@dataclass
class Config:
    name: str
    points: dict[str, Point]
    claims: list[Claim]
    target: Claim
    target_bound: bool = False
    extra: list[Claim] = field(default_factory=list)

    def all_claims(self) -> list[Claim]:
        return self.claims + [self.target] + self.extra

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "name": self.name,
            "points": {k: p.to_json() for k, p in self.points.items()},
            "claims": [c.to_json() for c in self.claims],
            "target": self.target.to_json(),
            "target_bound": self.target_bound,
            "extra": [c.to_json() for c in self.extra],
        }


@dataclass
class ClaimCheck:
    claim: Claim
    actual: Fraction

    @property
    def ok(self) -> bool:
        return self.actual == self.claim.sqdist


@dataclass
class ValidationReport:
    name: str
    checks: list[ClaimCheck]
    coincident: list[list[str]]

    @property
    def failures(self) -> list[ClaimCheck]:
        return [c for c in self.checks if not c.ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "name": self.name,
            "checked": len(self.checks),
            "failed": [[c.claim.a, c.claim.b, format_rat(c.claim.sqdist), format_rat(c.actual)]
                       for c in self.failures],
            "coincident": self.coincident,
            "ok": self.ok,
        }


def validate(config: Config) -> ValidationReport:
    checks = [ClaimCheck(c, sqdist(config.points[c.a], config.points[c.b]))
              for c in config.all_claims()]
    groups: dict[Point, list[str]] = {}
    for label, p in config.points.items():
        groups.setdefault(p, []).append(label)
    coincident = [labels for labels in groups.values() if len(labels) > 1]
    return ValidationReport(config.name, checks, coincident)


def _pt(scale, *coords) -> Point:
    return Point([Fraction(scale) * as_rat(c) for c in coords])


# coordinates of the regular-simplex configuration, unit edge
_FIG1_X = (0, 0, 0, 0, 0, 0, 0, 0)
_FIG1_Y = (Fraction(3, 8), (-3, 0, 0, 0, 1, 1, 1, -2))
_FIG1_YT = (Fraction(1, 6), (-8, 1, 1, 3, 1, 0, -1, -2))
_FIG1_P = [
    (1, (-1, 0, 0, 0, 0, 0, 0, 0)),
    (Fraction(1, 2), (-1, 1, 0, 0, 0, 0, 1, -1)),
    (Fraction(1, 2), (-1, -1, 0, 0, 0, 0, 1, -1)),
    (Fraction(1, 2), (-1, 0, 1, 0, 0, 1, 0, -1)),
    (Fraction(1, 2), (-1, 0, -1, 0, 0, 1, 0, -1)),
    (Fraction(1, 2), (-1, 0, 0, 1, 1, 0, 0, -1)),
    (Fraction(1, 2), (-1, 0, 0, -1, 1, 0, 0, -1)),
    (Fraction(1, 2), (-1, 0, 0, 0, 1, 1, 1, 0)),
]


def fig1_q8(scale: RatLike = 1) -> Config:
    """The 19-point simplex gadget: |x - y| = |x - y~| = (3/2) * scale."""
    s = as_rat(scale)
    if s <= 0:
        raise BadScale(f"scale must be positive, got {s}")
    pts: dict[str, Point] = {
        "x": _pt(s, *_FIG1_X),
        "y": _pt(s * _FIG1_Y[0], *_FIG1_Y[1]),
        "y~": _pt(s * _FIG1_YT[0], *_FIG1_YT[1]),
    }
    ps = [_pt(s * f, *c) for f, c in _FIG1_P]
    for i, p in enumerate(ps, 1):
        pts[f"p{i}"] = p
    for i, p in enumerate(ps, 1):
        pts[f"p~{i}"] = reflect_bisector(pts["y"], pts["y~"], p)
    d2 = s * s
    idx = range(1, 9)
    claims = [Claim("y", "y~", d2)]
    claims += [Claim("x", f"p{i}", d2) for i in idx]
    claims += [Claim("y", f"p{i}", d2) for i in idx]
    claims += [Claim(f"p{i}", f"p{j}", d2) for i, j in combinations(idx, 2)]
    claims += [Claim("x", f"p~{i}", d2) for i in idx]
    claims += [Claim("y~", f"p~{i}", d2) for i in idx]
    claims += [Claim(f"p~{i}", f"p~{j}", d2) for i, j in combinations(idx, 2)]
    far = Fraction(9, 4) * d2
    return Config(
        name=f"fig1(scale={format_rat(s)})",
        points=pts,
        claims=claims,
        target=Claim("x", "y", far),
        extra=[Claim("x", "y~", far)],
    )


_FIG2_P = [
    (-Fraction(3, 2), 0, 0, 0, 0, 0, 0, 0),
    (-Fraction(3, 4), Fraction(3, 4), 0, 0, 0, 0, Fraction(3, 4), -Fraction(3, 4)),
    (-Fraction(3, 4), -Fraction(3, 4), 0, 0, 0, 0, Fraction(3, 4), -Fraction(3, 4)),
    (-Fraction(3, 4), 0, Fraction(3, 4), 0, 0, Fraction(3, 4), 0, -Fraction(3, 4)),
    (-Fraction(3, 4), 0, -Fraction(3, 4), 0, 0, Fraction(3, 4), 0, -Fraction(3, 4)),
    (-Fraction(3, 4), 0, 0, Fraction(3, 4), Fraction(3, 4), 0, 0, -Fraction(3, 4)),
    (-Fraction(3, 4), 0, 0, -Fraction(3, 4), Fraction(3, 4), 0, 0, -Fraction(3, 4)),
    (-Fraction(3, 4), 0, 0, 0, Fraction(3, 4), Fraction(3, 4), Fraction(3, 4), 0),
]
_FIG2_X = (-Fraction(3, 4), 0, 0, 0, Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), -Fraction(1, 2))
_FIG2_Y = (-Fraction(15, 16), 0, 0, 0, Fraction(5, 16), Fraction(5, 16), Fraction(5, 16), -Fraction(5, 8))


def fig2_q8() -> Config:
    """Bound gadget: x, y apexes over a simplex of edge 3/2, |x - y| = 1/4."""
    pts: dict[str, Point] = {"x": Point(_FIG2_X), "y": Point(_FIG2_Y)}
    for i, c in enumerate(_FIG2_P, 1):
        pts[f"p{i}"] = Point(c)
    one, edge = Fraction(1), Fraction(9, 4)
    idx = range(1, 9)
    claims = [Claim("x", f"p{i}", one) for i in idx]
    claims += [Claim("y", f"p{i}", one) for i in idx]
    claims += [Claim(f"p{i}", f"p{j}", edge) for i, j in combinations(idx, 2)]
    return Config("fig2", pts, claims, Claim("x", "y", Fraction(1, 16)), target_bound=True)


def fig3_layout(x: Point, y: Point) -> tuple[Point, Point]:
    """Midpoint s and the point t beyond y with |xt| = 9/4, |yt| = 1/4."""
    if sqdist(x, y) != 4:
        raise WrongDistance(f"need |xy|^2 = 4, got {sqdist(x, y)}")
    return affine(x, y, Fraction(1, 2)), affine(x, y, Fraction(9, 8))


def fig3_config(x: Point | None = None, y: Point | None = None) -> Config:
    if x is None:
        x, y = Point.zero(DIM), Point.basis(DIM, 0, 2)
    s, t = fig3_layout(x, y)
    claims = [
        Claim("x", "s", Fraction(1)),
        Claim("s", "y", Fraction(1)),
        Claim("y", "t", Fraction(1, 16), bound=True),
        Claim("x", "t", Fraction(81, 16)),
    ]
    return Config("fig3", {"x": x, "y": y, "s": s, "t": t}, claims, Claim("x", "y", Fraction(4)))


def fig4_chain(x: Point, y: Point, k: int) -> list[Point]:
    if k < 1:
        raise BadParameter(f"k must be positive, got {k}")
    if sqdist(x, y) != k * k:
        raise WrongDistance(f"need |xy|^2 = {k * k}, got {sqdist(x, y)}")
    return [affine(x, y, Fraction(i, k)) for i in range(k + 1)]


def fig4_config(k: int, x: Point | None = None, y: Point | None = None) -> Config:
    if x is None:
        x, y = Point.zero(DIM), Point.basis(DIM, 0, k)
    ws = fig4_chain(x, y, k)
    pts = {f"w{i}": w for i, w in enumerate(ws)}
    claims = [Claim(f"w{i}", f"w{i + 1}", Fraction(1)) for i in range(k)]
    claims += [Claim(f"w{i}", f"w{i + 2}", Fraction(4)) for i in range(k - 1)]
    return Config(f"fig4(k={k})", pts, claims, Claim("w0", f"w{k}", Fraction(k * k)))


def fig5_layout(p: int, q: int) -> Config:
    """Similar triangles giving |xy| = p/q from integer distances p, (q-1)p, qp."""
    if p < 1 or q < 2:
        raise BadParameter(f"need p >= 1 and q >= 2, got p={p}, q={q}")
    xt, yt, z = isoceles_triangle(p, q * p)
    x = affine(z, xt, Fraction(1, q))
    y = affine(z, yt, Fraction(1, q))
    P, Q, R = Fraction(p * p), Fraction((q * p) ** 2), Fraction(((q - 1) * p) ** 2)
    claims = [
        Claim("x~", "y~", P),
        Claim("x~", "x", R),
        Claim("x", "z", P),
        Claim("x~", "z", Q),
        Claim("y~", "y", R),
        Claim("y", "z", P),
        Claim("y~", "z", Q),
    ]
    pts = {"x": x, "y": y, "x~": xt, "y~": yt, "z": z}
    return Config(f"fig5(p={p},q={q})", pts, claims, Claim("x", "y", Fraction(p, q) ** 2))


def fig7_params(r2: RatLike) -> tuple[Fraction, Fraction]:
    """(a, b) with a^2 - b^2 = r2: a = r2 + 1/4, b = |r2 - 1/4|."""
    r2 = as_rat(r2)
    if r2 <= 0:
        raise BadDistance(f"squared distance must be positive, got {r2}")
    if r2 == Fraction(1, 4):
        raise DegenerateHalf("|xy| = 1/2 is rational; use the rational path")
    quarter = Fraction(1, 4)
    return r2 + quarter, abs(r2 - quarter)


def fig7_layout(r2: RatLike) -> Config:
    r2 = as_rat(r2)
    a, b = fig7_params(r2)
    k, l, m, n = four_square_rat(r2)
    zero = Fraction(0)
    pts = {
        "x": Point.zero(DIM),
        "y": Point([zero, k, l, m, n, zero, zero, zero]),
        "s": Point([-b] + [zero] * 7),
        "t": Point([b] + [zero] * 7),
    }
    claims = [
        Claim("s", "x", b * b),
        Claim("x", "t", b * b),
        Claim("s", "t", 4 * b * b),
        Claim("s", "y", a * a),
        Claim("t", "y", a * a),
    ]
    return Config(f"fig7(r2={format_rat(r2)})", pts, claims, Claim("x", "y", r2))
