"""Serialization of witness sets: JSON, GraphML and a DIMACS-style edge list.

The JSON writer streams, so large witnesses never exist as one nested dict.
"""
from __future__ import annotations

import json
from typing import IO, Any
from xml.sax.saxutils import XMLGenerator

import numpy as np

from ..errors import RationalSyntax
from ..exactq import Point, format_rat, parse_rat
from .build import WitnessSet
from .plan import RULES
from .store import Provenance

SCHEMA = 1


def _write_provenance(prov: Provenance, fp: IO[str]) -> None:
    order, start = prov.child_index()
    rules = [RULES[r] for r in prov.rule.tolist()]
    a, b, sq = prov.a.tolist(), prov.b.tolist(), prov.sq.tolist()
    sq_text = [json.dumps(format_rat(v)) for v in prov.sq_values]
    # explicit stack in place of recursion; "]}" closes a node with children
    stack: list[Any] = [0]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            fp.write(item)
            continue
        rule = rules[item]
        fp.write(f'{{"rule":"{rule}","pair":[{a[item]},{b[item]}],"sqdist":{sq_text[sq[item]]}')
        if rule == "FIG2":
            fp.write(',"bound":true')
        kids = order[start[item]:start[item + 1]].tolist()
        if not kids:
            fp.write("}")
            continue
        fp.write(',"children":[')
        stack.append("]}")
        for pos in range(len(kids) - 1, -1, -1):
            stack.append(kids[pos])
            if pos:
                stack.append(",")


def write_json(W: WitnessSet, fp: IO[str]) -> None:
    fp.write('{"schema":%d,"dim":%d,"points":[' % (SCHEMA, W.dim))
    for k, p in enumerate(W.points):
        if k:
            fp.write(",")
        fp.write(json.dumps(p.to_json(), separators=(",", ":")))
    fp.write('],"unit_edges":[')
    fp.write(",".join(f"[{i},{j}]" for i, j in W.edges.tolist()))
    ti, tj, tsq = W.target
    fp.write('],"target":' + json.dumps(
        {"i": ti, "j": tj, "sqdist": format_rat(tsq), "bound": W.bound}, separators=(",", ":")))
    fp.write(',"stats":' + json.dumps(
        {"coincidences": W.coincidences, "edge_duplicates": W.edge_duplicates}, separators=(",", ":")))
    fp.write(',"provenance":')
    _write_provenance(W.provenance, fp)
    fp.write("}\n")


def to_json(W: WitnessSet) -> dict:
    from io import StringIO

    buf = StringIO()
    write_json(W, buf)
    return json.loads(buf.getvalue())


def from_json(data: dict) -> WitnessSet:
    try:
        points = [Point.from_json(p) for p in data["points"]]
        edges = np.asarray(data["unit_edges"], dtype=np.int64).reshape(-1, 2)
        t = data["target"]
        target = (int(t["i"]), int(t["j"]), parse_rat(t["sqdist"]))
        prov = Provenance.from_nested(data["provenance"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, RationalSyntax):
            raise
        raise ValueError(f"malformed witness JSON: {exc}") from exc
    stats = data.get("stats", {})
    return WitnessSet(points, edges, target, prov, bound=bool(t.get("bound", False)),
                      coincidences=int(stats.get("coincidences", 0)),
                      edge_duplicates=int(stats.get("edge_duplicates", 0)))


def read_json(fp: IO[str]) -> WitnessSet:
    return from_json(json.load(fp))


def write_graphml(W: WitnessSet, fp: IO[str]) -> None:
    ti, tj, tsq = W.target
    g = XMLGenerator(fp, encoding="utf-8", short_empty_elements=True)
    g.startDocument()
    g.startElement("graphml", {"xmlns": "http://graphml.graphdrawing.org/xmlns"})
    keys = [
        ("coords", "node", "string"),
        ("target_i", "graph", "int"),
        ("target_j", "graph", "int"),
        ("target_sqdist", "graph", "string"),
        ("target_bound", "graph", "boolean"),
    ]
    for name, scope, typ in keys:
        g.startElement("key", {"id": name, "for": scope, "attr.name": name, "attr.type": typ})
        g.endElement("key")
    g.startElement("graph", {"id": "S", "edgedefault": "undirected"})
    for name, value in (("target_i", ti), ("target_j", tj),
                        ("target_sqdist", format_rat(tsq)),
                        ("target_bound", "true" if W.bound else "false")):
        g.startElement("data", {"key": name})
        g.characters(str(value))
        g.endElement("data")
    for k, p in enumerate(W.points):
        g.startElement("node", {"id": f"n{k}"})
        g.startElement("data", {"key": "coords"})
        g.characters(",".join(p.to_json()))
        g.endElement("data")
        g.endElement("node")
    for i, j in W.edges.tolist():
        g.startElement("edge", {"source": f"n{i}", "target": f"n{j}"})
        g.endElement("edge")
    g.endElement("graph")
    g.endElement("graphml")
    g.endDocument()


def write_dimacs(W: WitnessSet, fp: IO[str]) -> None:
    """1-based ``e u v`` lines; the target pair rides in comment lines."""
    ti, tj, tsq = W.target
    fp.write("c unit-distance witness graph\n")
    fp.write(f"c target {ti + 1} {tj + 1} sqdist {format_rat(tsq)}"
             f"{' bound' if W.bound else ''}\n")
    fp.write(f"p edge {W.num_points} {W.num_edges}\n")
    for i, j in W.edges.tolist():
        fp.write(f"e {i + 1} {j + 1}\n")


def read_dimacs(fp: IO[str]) -> tuple[int, list[tuple[int, int]], tuple[int, int, str]]:
    n, edges, target = 0, [], None
    for line in fp:
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "c" and len(parts) >= 5 and parts[1] == "target":
            target = (int(parts[2]) - 1, int(parts[3]) - 1, parts[5])
        elif parts[0] == "p":
            n = int(parts[2])
        elif parts[0] == "e":
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
    return n, edges, target
