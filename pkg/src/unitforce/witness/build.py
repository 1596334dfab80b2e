"""Materialized witness sets S_xy in Q^8.

Every squared distance gets one canonical witness, anchored at the
configuration's own coordinates and cached.  A witness for an arbitrary pair
is the canonical one carried over by a pair-to-pair isometry; sub-witnesses
are carried onto their configuration pairs the same way and merged into one
interning store, so exactly coincident points collapse to a single id.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import BudgetExceeded, DegeneratePair, DimMismatch, WrongDistance
from ..exactq import Point, RatLike, as_rat, sqdist
from ..isometries import segment_isometry
from .plan import BOUND_SQ, ONE, RULE_CODE, base_pair, canonical_config, classify
from .store import PointStore, Provenance

DIM = 8
DEFAULT_BUDGET = 10**7

_BASE = RULE_CODE["BASE"]


@dataclass
class WitnessSet:
    points: list[Point]
    edges: np.ndarray          # (E, 2) int64, rows i < j, sorted, unique
    target: tuple[int, int, Fraction]
    provenance: Provenance
    bound: bool = False
    coincidences: int = 0      # points merged by interning, over the whole construction
    edge_duplicates: int = 0   # unit edges merged, likewise

    @property
    def dim(self) -> int:
        return self.points[0].dim

    @property
    def num_points(self) -> int:
        return len(self.points)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def rule(self) -> str:
        return self.provenance.node(0)[0]

    def point(self, i: int) -> Point:
        return self.points[i]

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in self.edges]


# squared distance, bound flag -> canonical WitnessSet
_MEMO: dict[tuple[Fraction, bool], WitnessSet] = {}
_MEMO_LOCK = threading.RLock()


def clear_cache() -> None:
    with _MEMO_LOCK:
        _MEMO.clear()


def _dedup_edges(edges: np.ndarray) -> np.ndarray:
    if len(edges) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    lo = np.minimum(edges[:, 0], edges[:, 1])
    hi = np.maximum(edges[:, 0], edges[:, 1])
    uniq = np.unique(np.stack([lo, hi], axis=1), axis=0)
    return uniq.astype(np.int64, copy=False)


class _Assembler:
    """Accumulates one witness: config points, direct unit edges, transported sub-witnesses."""

    def __init__(self, budget: int):
        self.budget = budget
        self.store = PointStore()
        self.edge_chunks: list[np.ndarray] = []
        self.direct_edges: list[tuple[int, int]] = []
        self.prov = {k: [] for k in ("rule", "a", "b", "sq", "parent")}
        self.sq_values: list[Fraction] = []
        self._sq_code: dict[Fraction, int] = {}
        self.n_nodes = 0
        self.coincidences = 0
        self.edge_duplicates = 0

    def code(self, v: Fraction) -> int:
        c = self._sq_code.get(v)
        if c is None:
            c = self._sq_code[v] = len(self.sq_values)
            self.sq_values.append(v)
        return c

    def add_node(self, rule: str, a: int, b: int, sq: Fraction, parent: int) -> int:
        for key, v in zip(("rule", "a", "b", "sq", "parent"),
                          (np.array([RULE_CODE[rule]]), np.array([a]), np.array([b]),
                           np.array([self.code(sq)]), np.array([parent]))):
            self.prov[key].append(v)
        self.n_nodes += 1
        return self.n_nodes - 1

    def check_budget(self) -> None:
        if len(self.store) > self.budget:
            raise BudgetExceeded(f"more than {self.budget} points")

    def merge(self, sub: WitnessSet, ia: int, ib: int, parent: int) -> None:
        """Carry ``sub`` onto the stored pair (ia, ib) and merge it."""
        if sub.num_points > self.budget:
            raise BudgetExceeded(f"sub-witness alone has {sub.num_points} > {self.budget} points")
        pts = self.store.points
        iso = segment_isometry(sub.points[0], sub.points[1], pts[ia], pts[ib])
        mapping = np.empty(sub.num_points, dtype=np.int64)
        mapping[0], mapping[1] = ia, ib
        hits0 = self.store.hits
        apply_ints, intern = iso.apply_ints, self.store.intern_ints
        for k in range(2, sub.num_points):
            p = sub.points[k]
            mapping[k] = intern(*apply_ints(p.num, p.den))
        self.coincidences += sub.coincidences + (self.store.hits - hits0)
        self.edge_duplicates += sub.edge_duplicates
        self.edge_chunks.append(mapping[sub.edges])
        sp = sub.provenance
        lookup = np.array([self.code(v) for v in sp.sq_values], dtype=np.int32)
        self.prov["rule"].append(sp.rule)
        self.prov["a"].append(mapping[sp.a])
        self.prov["b"].append(mapping[sp.b])
        self.prov["sq"].append(lookup[sp.sq])
        self.prov["parent"].append(np.where(sp.parent < 0, parent, sp.parent + self.n_nodes))
        self.n_nodes += len(sp)
        self.check_budget()

    def finish(self, target: tuple[int, int, Fraction], bound: bool) -> WitnessSet:
        chunks = list(self.edge_chunks)
        if self.direct_edges:
            chunks.append(np.array(self.direct_edges, dtype=np.int64))
        raw = np.concatenate(chunks) if chunks else np.zeros((0, 2), dtype=np.int64)
        edges = _dedup_edges(raw)
        prov = Provenance(*(np.concatenate(self.prov[k]) for k in ("rule", "a", "b", "sq", "parent")),
                          sq_values=self.sq_values)
        return WitnessSet(
            points=self.store.points,
            edges=edges,
            target=target,
            provenance=prov,
            bound=bound,
            coincidences=self.coincidences,
            edge_duplicates=self.edge_duplicates + len(raw) - len(edges),
        )


def _base_witness() -> WitnessSet:
    x, y = base_pair()
    prov = Provenance([_BASE], [0], [1], [0], [-1], [ONE])
    return WitnessSet([x, y], np.array([[0, 1]], dtype=np.int64), (0, 1, ONE), prov)


def canonical_witness(sq: RatLike, bound: bool = False, budget: int = DEFAULT_BUDGET) -> WitnessSet:
    """Cached witness for ``sq`` at the rule's canonical coordinates (x = point 0, y = point 1)."""
    sq = as_rat(sq)
    key = (sq, bound)
    hit = _MEMO.get(key)
    if hit is not None:
        return hit
    with _MEMO_LOCK:
        hit = _MEMO.get(key)
        if hit is not None:
            return hit
        w = _construct(sq, bound, budget)
        _MEMO[key] = w
        return w


def _construct(sq: Fraction, bound: bool, budget: int) -> WitnessSet:
    rule, _ = classify(sq, bound)
    if rule == "BASE":
        return _base_witness()
    cfg = canonical_config(sq, bound)
    asm = _Assembler(budget)
    ids = {}
    for label in [cfg.target.a, cfg.target.b] + [k for k in cfg.points if k not in (cfg.target.a, cfg.target.b)]:
        ids[label] = asm.store.intern(cfg.points[label])
    asm.coincidences = asm.store.hits
    asm.check_budget()
    root = asm.add_node(rule, ids[cfg.target.a], ids[cfg.target.b], sq, -1)
    for claim in cfg.claims:
        ia, ib = ids[claim.a], ids[claim.b]
        if claim.sqdist == ONE and not claim.bound:
            asm.direct_edges.append((ia, ib))
            asm.add_node("BASE", ia, ib, ONE, root)
        else:
            sub = canonical_witness(claim.sqdist, claim.bound, budget)
            asm.merge(sub, ia, ib, root)
    return asm.finish((0, 1, sq), bound)


def transport(w: WitnessSet, x: Point, y: Point) -> WitnessSet:
    """Copy of ``w`` carried onto the pair (x, y) by a pair-to-pair isometry."""
    iso = segment_isometry(w.points[0], w.points[1], x, y)
    store = PointStore()
    store.intern(x)
    store.intern(y)
    apply_ints, intern = iso.apply_ints, store.intern_ints
    for p in w.points[2:]:
        intern(*apply_ints(p.num, p.den))
    # an isometry is injective, so ids are preserved one-for-one
    assert len(store) == w.num_points and store.hits == 0
    p = w.provenance
    prov = Provenance(p.rule.copy(), p.a.copy(), p.b.copy(), p.sq.copy(), p.parent.copy(), p.sq_values)
    return WitnessSet(store.points, w.edges.copy(), w.target, prov, w.bound,
                      w.coincidences, w.edge_duplicates)


def _check_pair(x: Point, y: Point) -> None:
    if x.dim != DIM or y.dim != DIM:
        raise DimMismatch(f"witness sets live in Q^8, got dimensions {x.dim} and {y.dim}")
    if x == y:
        raise DegeneratePair("x and y coincide")


def build_witness(x: Point, y: Point, budget: int = DEFAULT_BUDGET) -> WitnessSet:
    """A finite S_xy in Q^8 such that unit-distance-preserving maps preserve |xy|."""
    _check_pair(x, y)
    if budget <= 0:
        raise BudgetExceeded("budget must be positive")
    w = canonical_witness(sqdist(x, y), False, budget)
    if w.num_points > budget:
        raise BudgetExceeded(f"witness has {w.num_points} > {budget} points")
    return transport(w, x, y)


def bound_set(x: Point, y: Point, budget: int = DEFAULT_BUDGET) -> WitnessSet:
    """Z_xy for |xy| = 1/4: unit-distance-preserving maps satisfy |f(x)f(y)| <= |xy|."""
    _check_pair(x, y)
    if sqdist(x, y) != BOUND_SQ:
        raise WrongDistance(f"bound sets need |xy|^2 = 1/16, got {sqdist(x, y)}")
    w = canonical_witness(BOUND_SQ, True, budget)
    if w.num_points > budget:
        raise BudgetExceeded(f"witness has {w.num_points} > {budget} points")
    return transport(w, x, y)
