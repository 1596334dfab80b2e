"""Constructible-number expressions: rationals closed under + - * / and sqrt.

Grammar (sqrt binds tightest, then * /, then + -; all binary operators are
left-associative)::

    expr    := term (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*
    factor  := "-" factor | primary
    primary := INT | "(" expr ")" | ("sqrt" | "√") "(" expr ")" | "√" primary

Literals are non-negative integers; ``p/q`` is the division of two literals.
Unary minus parses as ``0 - x``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..errors import ExprSyntax
from ..exactq import format_rat, rational_sqrt


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sqrt:
    arg: "Expr"


Expr = Union[Num, Bin, Sqrt]

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)|(√)|([-+*/()]))")


def _tokenize(s: str) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    while pos < len(s):
        if s[pos:].strip() == "":
            break
        m = _TOKEN.match(s, pos)
        if not m:
            raise ExprSyntax(f"unexpected character {s[pos:].lstrip()[0]!r}", len(s) - len(s[pos:].lstrip()))
        start = m.start(m.lastindex)
        kind = ("int", "sqrt", "sqrt", "op")[m.lastindex - 1]
        out.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    out.append(("end", "", len(s)))
    return out


class _Parser:
    def __init__(self, s: str):
        self.toks = _tokenize(s)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str):
        kind, val, pos = self.take()
        if val != text:
            raise ExprSyntax(f"expected {text!r}, found {val or 'end of input'!r}", pos)

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Bin(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            right = self.factor()
            if op == "/" and isinstance(right, Num) and right.value == 0:
                raise ExprSyntax("division by zero", pos)
            node = Bin(op, node, right)
        return node

    def factor(self) -> Expr:
        if self.peek()[1] == "-":
            self.take()
            return Bin("-", Num(Fraction(0)), self.factor())
        return self.primary()

    def primary(self) -> Expr:
        kind, val, pos = self.take()
        if kind == "int":
            return Num(Fraction(int(val)))
        if kind == "sqrt":
            if val == "sqrt" or self.peek()[1] == "(":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
            else:
                inner = self.primary()
            if isinstance(inner, Num) and inner.value < 0:
                raise ExprSyntax("square root of a negative literal", pos)
            return Sqrt(inner)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ExprSyntax(f"unexpected {val or 'end of input'!r}", pos)


def parse_expr(s: str) -> Expr:
    p = _Parser(s)
    e = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ExprSyntax(f"unexpected {val!r}", pos)
    return e


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(e: Expr) -> int:
    if isinstance(e, Bin):
        return _PREC[e.op]
    if isinstance(e, Num) and (e.value.denominator != 1 or e.value < 0):
        return 2
    return 3


def format_expr(e: Expr) -> str:
    if isinstance(e, Num):
        v = e.value
        if v.denominator == 1 and v >= 0:
            return str(v.numerator)
        return "(" + format_rat(v) + ")"
    if isinstance(e, Sqrt):
        return "sqrt(" + format_expr(e.arg) + ")"
    p = _PREC[e.op]
    left = format_expr(e.left)
    if _prec(e.left) < p:
        left = f"({left})"
    right = format_expr(e.right)
    if _prec(e.right) <= p and isinstance(e.right, Bin):
        right = f"({right})"
    return f"{left}{e.op}{right}"


def exact_value(e: Expr, memo: dict | None = None) -> Fraction | None:
    """The value of ``e`` when every square root in it is of a rational square."""
    if memo is None:
        memo = {}
    key = id(e)
    if key in memo:
        return memo[key]
    if isinstance(e, Num):
        out = e.value
    elif isinstance(e, Sqrt):
        a = exact_value(e.arg, memo)
        out = rational_sqrt(a) if a is not None else None
    else:
        a = exact_value(e.left, memo)
        b = exact_value(e.right, memo) if a is not None else None
        if a is None or b is None:
            out = None
        elif e.op == "+":
            out = a + b
        elif e.op == "-":
            out = a - b
        elif e.op == "*":
            out = a * b
        elif b == 0:
            out = None
        else:
            out = a / b
    memo[key] = out
    return out


def node_count(e: Expr) -> int:
    seen: set[int] = set()
    stack = [e]
    while stack:
        x = stack.pop()
        if id(x) in seen:
            continue
        seen.add(id(x))
        if isinstance(x, Bin):
            stack += [x.left, x.right]
        elif isinstance(x, Sqrt):
            stack.append(x.arg)
    return len(seen)


def num(v) -> Num:
    return Num(Fraction(v))

