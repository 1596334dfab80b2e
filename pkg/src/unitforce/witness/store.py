"""Point interning and the flat provenance tree."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..exactq import Point, format_rat, parse_rat
from .plan import RULE_CODE, RULES


class PointStore:
    """Hash-consing table: exactly equal points get the same dense id."""

    def __init__(self):
        self._ids: dict[tuple, int] = {}
        self.points: list[Point] = []
        self.hits = 0

    def __len__(self) -> int:
        return len(self.points)

    def intern(self, p: Point) -> int:
        key = (p.num, p.den)
        i = self._ids.get(key)
        if i is not None:
            self.hits += 1
            return i
        i = len(self.points)
        self._ids[key] = i
        self.points.append(p)
        return i

    def intern_ints(self, num: tuple, den: int) -> int:
        key = (num, den)
        i = self._ids.get(key)
        if i is not None:
            self.hits += 1
            return i
        i = len(self.points)
        self._ids[key] = i
        p = Point.__new__(Point)
        p.num, p.den = num, den
        p._hash = hash(key)
        self.points.append(p)
        return i

    def lookup(self, p: Point) -> int | None:
        return self._ids.get((p.num, p.den))


class Provenance:
    """Rule applications as parallel arrays; node 0 is the root.

    Node ``i`` claims that its pair ``(a[i], b[i])`` is at squared distance
    ``sq_values[sq[i]]`` and is witnessed by rule ``RULES[rule[i]]`` from its
    children (the nodes whose ``parent`` is ``i``).
    """

    def __init__(self, rule, a, b, sq, parent, sq_values: list[Fraction]):
        self.rule = np.asarray(rule, dtype=np.int8)
        self.a = np.asarray(a, dtype=np.int64)
        self.b = np.asarray(b, dtype=np.int64)
        self.sq = np.asarray(sq, dtype=np.int32)
        self.parent = np.asarray(parent, dtype=np.int64)
        self.sq_values = list(sq_values)
        self._children = None

    def __len__(self) -> int:
        return len(self.rule)

    def node(self, i: int) -> tuple[str, int, int, Fraction]:
        return RULES[self.rule[i]], int(self.a[i]), int(self.b[i]), self.sq_values[self.sq[i]]

    def child_index(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR layout: children of node i are order[start[i]:start[i+1]]."""
        if self._children is None:
            n = len(self)
            par = self.parent[1:]
            order = np.argsort(par, kind="stable") + 1
            counts = np.bincount(par, minlength=n) if n > 1 else np.zeros(n, dtype=np.int64)
            start = np.zeros(n + 1, dtype=np.int64)
            np.cumsum(counts, out=start[1:])
            self._children = (order, start)
        return self._children

    def children(self, i: int) -> np.ndarray:
        order, start = self.child_index()
        return order[start[i]:start[i + 1]]

    def rule_counts(self) -> dict[str, int]:
        counts = np.bincount(self.rule, minlength=len(RULES))
        return {RULES[i]: int(c) for i, c in enumerate(counts) if c}

    def to_nested(self, i: int = 0) -> dict:
        rule, a, b, sq = self.node(i)
        out = {"rule": rule, "pair": [a, b], "sqdist": format_rat(sq)}
        if rule == "FIG2":
            out["bound"] = True
        kids = self.children(i)
        if len(kids):
            out["children"] = [self.to_nested(int(c)) for c in kids]
        return out

    @classmethod
    def from_nested(cls, tree: dict) -> "Provenance":
        rule, a, b, sq, parent = [], [], [], [], []
        values: dict[Fraction, int] = {}
        stack = [(tree, -1)]
        while stack:
            node, par = stack.pop()
            idx = len(rule)
            rule.append(RULE_CODE[node["rule"]])
            a.append(int(node["pair"][0]))
            b.append(int(node["pair"][1]))
            v = parse_rat(node["sqdist"])
            sq.append(values.setdefault(v, len(values)))
            parent.append(par)
            for child in reversed(node.get("children", ())):
                stack.append((child, idx))
        return cls(rule, a, b, sq, parent, list(values))
