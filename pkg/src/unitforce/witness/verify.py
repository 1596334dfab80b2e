"""Exact re-verification of a witness set and its provenance."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import UnitForceError
from ..exactq import format_rat, sqdist_ints
from .build import WitnessSet
from .plan import RULE_CODE, RULES, classify, shape

_MAX_LISTED = 50


@dataclass
class VerifyReport:
    points: int
    edges: int
    coincidences: int
    provenance_nodes: int
    edge_failures: list[tuple[int, int, Fraction]] = field(default_factory=list)
    target_failures: list[str] = field(default_factory=list)
    provenance_failures: list[str] = field(default_factory=list)
    structural_failures: list[str] = field(default_factory=list)
    rule_counts: dict[str, int] = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return (len(self.edge_failures) + len(self.target_failures)
                + len(self.provenance_failures) + len(self.structural_failures))

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "ok": self.ok,
            "points": self.points,
            "edges": self.edges,
            "coincidences": self.coincidences,
            "provenance_nodes": self.provenance_nodes,
            "rule_counts": self.rule_counts,
            "failures": self.failures,
            "edge_failures": [[i, j, format_rat(v)] for i, j, v in self.edge_failures[:_MAX_LISTED]],
            "target_failures": self.target_failures,
            "provenance_failures": self.provenance_failures[:_MAX_LISTED],
            "structural_failures": self.structural_failures[:_MAX_LISTED],
        }


def _sq(points, i: int, j: int) -> Fraction:
    p, q = points[i], points[j]
    s, d = sqdist_ints(p.num, p.den, q.num, q.den)
    return Fraction(s, d)


def _is_unit(points, i: int, j: int) -> bool:
    p, q = points[i], points[j]
    s, d = sqdist_ints(p.num, p.den, q.num, q.den)
    return s == d


def verify_witness(W: WitnessSet) -> VerifyReport:
    pts = W.points
    n = len(pts)
    prov = W.provenance
    rep = VerifyReport(points=n, edges=W.num_edges, coincidences=W.coincidences,
                       provenance_nodes=len(prov), rule_counts=prov.rule_counts())
    sf = rep.structural_failures

    dims = {p.dim for p in pts}
    if len(dims) != 1:
        sf.append(f"mixed dimensions {sorted(dims)}")

    edges = np.asarray(W.edges, dtype=np.int64).reshape(-1, 2)
    in_range = (edges >= 0) & (edges < n)
    if not in_range.all():
        sf.append("edge endpoint out of range")
        edges = edges[in_range.all(axis=1)]
    for i, j in edges.tolist():
        if i == j:
            rep.edge_failures.append((i, j, Fraction(0)))
        elif not _is_unit(pts, i, j):
            rep.edge_failures.append((i, j, _sq(pts, i, j)))

    ti, tj, tsq = W.target
    if not (0 <= ti < n and 0 <= tj < n):
        rep.target_failures.append("target endpoint missing from the store")
    elif ti == tj:
        rep.target_failures.append("target endpoints coincide")
    elif _sq(pts, ti, tj) != tsq:
        rep.target_failures.append(
            f"target |xy|^2 = {format_rat(_sq(pts, ti, tj))}, claimed {format_rat(tsq)}")

    if len(prov) == 0:
        sf.append("empty provenance")
        return rep
    _replay(W, edges, rep)
    return rep


def _replay(W: WitnessSet, edges: np.ndarray, rep: VerifyReport) -> None:
    pts, prov = W.points, W.provenance
    n = len(pts)
    pf, sf = rep.provenance_failures, rep.structural_failures
    ti, tj, tsq = W.target

    root_rule, ra, rb, rsq = prov.node(0)
    if (ra, rb) != (ti, tj) or rsq != tsq:
        sf.append("provenance root does not claim the target pair")
    if (root_rule == "FIG2") != W.bound:
        sf.append("bound flag disagrees with the root rule")
    if prov.parent[0] != -1 or (len(prov) > 1 and (prov.parent[1:] < 0).any()):
        sf.append("provenance must have exactly one root, node 0")
        return
    if (prov.parent[1:] >= np.arange(1, len(prov))).any():
        sf.append("provenance parents must precede their children")
        return
    if ((prov.a < 0) | (prov.a >= n) | (prov.b < 0) | (prov.b >= n)).any():
        sf.append("provenance references a point outside the store")
        return

    # BASE leaves: each must be a stored unit edge, and every edge must come from one
    base = np.flatnonzero(prov.rule == RULE_CODE["BASE"])
    key = lambda i, j: np.minimum(i, j) * n + np.maximum(i, j)
    edge_keys = key(edges[:, 0], edges[:, 1])
    base_keys = key(prov.a[base], prov.b[base])
    one_code = [c for c, v in enumerate(prov.sq_values) if v == 1]
    bad_sq = base[~np.isin(prov.sq[base], one_code)]
    for i in bad_sq[:_MAX_LISTED]:
        pf.append(f"node {i}: BASE step on a non-unit claim")
    missing = base[~np.isin(base_keys, edge_keys)]
    for i in missing[:_MAX_LISTED]:
        sf.append(f"node {i}: BASE edge {{{prov.a[i]}, {prov.b[i]}}} missing from the edge set")
    orphan = ~np.isin(edge_keys, base_keys)
    for i, j in edges[orphan][:_MAX_LISTED].tolist():
        sf.append(f"edge {{{i}, {j}}} has no BASE step")

    order, start = prov.child_index()
    leaf = start[1:] == start[:-1]
    bad_leaf = np.flatnonzero(leaf & (prov.rule != RULE_CODE["BASE"]))
    for i in bad_leaf[:_MAX_LISTED]:
        sf.append(f"node {i}: leaf is not a BASE step")
    has_kids = base[~leaf[base]]
    for i in has_kids[:_MAX_LISTED]:
        sf.append(f"node {i}: BASE step has children")

    sq_values = prov.sq_values
    for i in np.flatnonzero(prov.rule != RULE_CODE["BASE"]).tolist():
        rule, a, b, sq = prov.node(i)
        bound = rule == "FIG2"
        if a == b or _sq(pts, a, b) != sq:
            pf.append(f"node {i} ({rule}): |{a} {b}|^2 is not {format_rat(sq)}")
        try:
            expected_rule, _ = classify(sq, bound)
            sh = shape(sq, bound)
        except UnitForceError as exc:
            pf.append(f"node {i} ({rule}): {exc}")
            continue
        if expected_rule != rule:
            pf.append(f"node {i}: rule {rule} does not apply to {format_rat(sq)}")
            continue
        kids = order[start[i]:start[i + 1]]
        got = Counter((sq_values[prov.sq[c]], RULES[prov.rule[c]] == "FIG2") for c in kids.tolist())
        if got != Counter(sh.subs):
            pf.append(f"node {i} ({rule}): sub-claims do not match the rule's pattern")
