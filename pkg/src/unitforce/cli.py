"""Command-line front end.

Exit codes: 0 success, 1 verification or derivation failure, 2 usage error,
3 budget exceeded.  JSON goes to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .errors import BudgetExceeded, NoDerivation, UnitForceError
from .exactq import Point, format_rat, parse_rat

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(payload: dict, plain: bool) -> None:
    if plain:
        for k, v in payload.items():
            if k != "schema":
                print(f"{k}: {v if not isinstance(v, (dict, list)) else json.dumps(v)}")
    else:
        print(json.dumps(payload, indent=2))


def _rat(s: str) -> Fraction:
    return parse_rat(s.strip())


def _read_json(path: str):
    try:
        with open(path) as fp:
            return json.load(fp)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not JSON: {exc}") from exc


def _point_file(path: str) -> Point:
    data = _read_json(path)
    if isinstance(data, dict):
        data = data.get("point", data.get("coords"))
    if not isinstance(data, list):
        raise UsageError(f"{path}: expected an array of rational strings")
    return Point([_rat(str(c)) for c in data])


def _point_inline(text: str) -> Point:
    return Point([_rat(c) for c in text.split(",")])


def _load_witness(path: str):
    from .witness.io import from_json

    try:
        return from_json(_read_json(path))
    except ValueError as exc:
        if isinstance(exc, UnitForceError):
            raise
        raise UsageError(f"{path}: {exc}") from exc


def _write_text(out: str | None, writer) -> None:
    if out is None or out == "-":
        writer(sys.stdout)
        return
    try:
        with open(out, "w") as fp:
            writer(fp)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror}") from exc


# ---- subcommands ----

def cmd_decompose(args) -> int:
    from .arith import four_square_rat

    q = _rat(args.value)
    squares = [format_rat(Fraction(v)) for v in four_square_rat(q)]
    _emit({"schema": 1, "input": format_rat(q), "squares": squares}, args.plain)
    return EXIT_OK


def cmd_config(args) -> int:
    from . import configs

    name = args.name
    if name == "fig1":
        cfg = configs.fig1_q8(_rat(args.scale))
    elif name == "fig2":
        cfg = configs.fig2_q8()
    elif name == "fig3":
        cfg = configs.fig3_config()
    elif name == "fig4":
        cfg = configs.fig4_config(args.k)
    elif name == "fig5":
        cfg = configs.fig5_layout(args.p, args.q)
    else:
        cfg = configs.fig7_layout(_rat(args.r2))
    payload = cfg.to_json()
    payload["validation"] = configs.validate(cfg).to_json()
    _emit(payload, args.plain)
    return EXIT_OK if payload["validation"]["ok"] else EXIT_FAIL


def cmd_build(args) -> int:
    from .witness import bound_set, build_witness
    from .witness.io import write_json

    if args.pair:
        x, y = (_point_file(p) for p in args.pair)
    elif args.coords:
        x, y = (_point_inline(c) for c in args.coords)
    else:
        raise UsageError("build needs --pair X.json Y.json or --coords X Y")
    make = bound_set if args.bound else build_witness
    W = make(x, y, budget=args.budget)
    _write_text(args.output, lambda fp: write_json(W, fp))
    print(f"built {W.num_points} points, {W.num_edges} unit edges", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .witness import verify_witness

    rep = verify_witness(_load_witness(args.witness))
    _emit(rep.to_json(), args.plain)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_estimate(args) -> int:
    from .witness.plan import describe, estimate_size

    sq = _rat(args.sqdist)
    est = estimate_size(sq, args.bound)
    payload = {"schema": 1, "sqdist": format_rat(sq), "bound": args.bound,
               "rule": describe(sq, args.bound), **est.to_json()}
    _emit(payload, args.plain)
    return EXIT_OK


def cmd_export(args) -> int:
    from .witness.io import write_dimacs, write_graphml, write_json

    W = _load_witness(args.witness)
    if args.format == "graphml":
        if args.output in (None, "-"):
            write_graphml(W, sys.stdout)
        else:
            with open(args.output, "w", encoding="utf-8") as fp:
                write_graphml(W, fp)
        return EXIT_OK
    writer = write_dimacs if args.format == "dimacs" else write_json
    _write_text(args.output, lambda fp: writer(W, fp))
    return EXIT_OK


def cmd_derive(args) -> int:
    from .dcalc import check, derive, parse_expr, render, size_account

    d = derive(parse_expr(args.expr), args.n)
    acct = size_account(d)
    rep = check(d, (64, 256))
    if args.json:
        payload = {"schema": 1, "expr": args.expr, "n": args.n,
                   "derivation": d.to_json(intervals=True),
                   "size": acct.to_json(), "check": rep.to_json()}
        print(json.dumps(payload, indent=2))
    else:
        print(render(d))
        print()
        print(f"witness size bound: {acct.points} points, {acct.edges} unit edges")
        print(f"derivation nodes: {acct.nodes}")
        for rule, count in acct.rule_counts.items():
            print(f"  {rule}: {count}")
        print("interval check (64, 256 bits): " + ("ok" if rep.ok else "FAILED"))
        for msg in rep.failures:
            print("  " + msg, file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_falsify(args) -> int:
    from .falsify import EmbeddingProblem, optimize

    W = _load_witness(args.witness)
    problem = EmbeddingProblem.from_witness(W, delta=args.delta)
    rep = optimize(problem, seed=args.seed, restarts=args.restarts, max_iters=args.max_iters)
    _emit(rep.to_json(), args.plain)
    return EXIT_OK


# ---- parser ----

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unitforce",
                                 description="Exact unit-distance witness sets in Q^8.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--plain", action="store_true", help="key: value lines instead of JSON")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--plain", action="store_true", default=argparse.SUPPRESS,
                        help="key: value lines instead of JSON")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("decompose", parents=[common], help="four squares summing to a non-negative rational")
    p.add_argument("value")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("config", parents=[common], help="dump and validate a figure configuration")
    p.add_argument("name", choices=["fig1", "fig2", "fig3", "fig4", "fig5", "fig7"])
    p.add_argument("--scale", default="1", help="fig1 scale d")
    p.add_argument("--k", type=int, default=3, help="fig4 chain length")
    p.add_argument("--p", type=int, default=1, help="fig5 numerator")
    p.add_argument("--q", type=int, default=2, help="fig5 denominator")
    p.add_argument("--r2", default="2", help="fig7 squared distance")
    p.set_defaults(func=cmd_config)

    p = sub.add_parser("build", parents=[common], help="build a witness set for a pair of points")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--pair", nargs=2, metavar=("X.json", "Y.json"))
    g.add_argument("--coords", nargs=2, metavar=("X", "Y"), help="comma-separated rationals")
    p.add_argument("--bound", action="store_true", help="bound set Z_xy (|xy|^2 = 1/16)")
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", parents=[common], help="exactly re-verify a witness JSON file")
    p.add_argument("witness")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("estimate", parents=[common], help="witness size bound without building")
    p.add_argument("--sqdist", required=True)
    p.add_argument("--bound", action="store_true")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("export", parents=[common], help="convert a witness JSON file")
    p.add_argument("witness")
    p.add_argument("--format", choices=["graphml", "dimacs", "json"], default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("derive", parents=[common], help="derive a constructible distance from the closure rules")
    p.add_argument("expr")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("falsify", parents=[common], help="search for an embedding breaking the forced distance")
    p.add_argument("witness")
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=2000)
    p.set_defaults(func=cmd_falsify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except NoDerivation as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except UnitForceError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
