"""Derivations of d in D_n by chaining the closure rules.

A :class:`Derivation` node records which rule produces its distance from its
children.  ``aux`` holds the extra distances the rule's union needs witnessed
(the doubled leg of a right triangle, the pair distances of a simplex, the
approximation set of a subtraction, ...), and ``impl`` is the construction a
derived rule (a + b, sqrt a) unfolds to.  Aux positions are fixed per rule,
see ``_AUX``.

Nodes are shared: the deriver memoizes on (rule, children, params), so a
derivation is a DAG and every walk below visits each node once.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from ..errors import BadParameter, DomainError, NegativeDistance, NoDerivation
from ..exactq import format_rat, rational_sqrt
from . import interval as iv
from .expr import Bin, Expr, Num, Sqrt, exact_value, format_expr, parse_expr
from .interval import Interval, eval_interval

AXIOM_0 = "AXIOM_0"
AXIOM_1 = "AXIOM_1"
R_SQRT2PLUS = "R_SQRT2PLUS"
R_DOUBLE = "R_DOUBLE"
R_TIMES_K = "R_TIMES_K"
R_DIV_K = "R_DIV_K"
R_PYTH_MINUS = "R_PYTH_MINUS"
R_MINUS = "R_MINUS"
R_PLUS = "R_PLUS"
R_MULDIV = "R_MULDIV"
R_SQRT = "R_SQRT"
T_EPS = "T_EPS"
Z_BOUND = "Z_BOUND"     # bound set inside a doubling; counted, never a node

RULES = (AXIOM_0, AXIOM_1, R_SQRT2PLUS, R_DOUBLE, R_TIMES_K, R_DIV_K,
         R_PYTH_MINUS, R_MINUS, R_PLUS, R_MULDIV, R_SQRT, T_EPS)

# what each aux slot holds
_AUX = {
    R_DOUBLE: ("sqrt2plus(c)", "sqrt2plus(sqrt2plus(c))"),
    R_TIMES_K: ("2c",),                       # k >= 3; k = 2 uses the R_DOUBLE slots
    R_DIV_K: ("k*c", "(k-1)*c"),
    R_PYTH_MINUS: ("2b",),
    R_MINUS: ("sqrt(2+2/n)", "sqrt(a^2+r^2)", "sqrt(b^2+r^2)", "T(b)"),
    R_MULDIV: ("m*a", "m*c", "m*|a-c|"),
    T_EPS: ("|xz|", "|zy|"),
}

_ONE = Fraction(1)
_CMP_BITS = 4096


@dataclass(eq=False)
class Derivation:
    rule: str
    value: Expr
    n: int
    children: tuple["Derivation", ...] = ()
    params: dict = field(default_factory=dict)
    aux: tuple["Derivation", ...] = ()
    impl: "Derivation | None" = None

    @property
    def exact(self) -> Fraction | None:
        return self.value.value if isinstance(self.value, Num) else None

    def walk(self) -> Iterator["Derivation"]:
        """Every distinct node reachable through children, aux and impl."""
        seen: set[int] = set()
        stack = [self]
        while stack:
            d = stack.pop()
            if id(d) in seen:
                continue
            seen.add(id(d))
            yield d
            stack.extend(reversed(d.links()))

    def links(self) -> list["Derivation"]:
        out = list(self.children) + list(self.aux)
        if self.impl is not None:
            out.append(self.impl)
        return out

    def tree_rules(self) -> Counter:
        return Counter(d.rule for d in self.walk())

    def label(self, limit: int = 48) -> str:
        if self.exact is not None:
            return format_rat(self.exact)
        s = format_expr(self.value)
        if len(s) <= limit:
            return s
        lo, hi = eval_interval(self.value, 64).to_floats()
        return f"~{(lo + hi) / 2:.12g}"

    def to_json(self, intervals: bool = False) -> dict:
        """Nested objects; a node seen before is emitted as {"ref": id}."""
        ids: dict[int, int] = {}

        def enc(d: "Derivation") -> dict:
            if id(d) in ids:
                return {"ref": ids[id(d)]}
            ids[id(d)] = len(ids)
            out: dict = {"id": ids[id(d)], "rule": d.rule, "value": d.label(10**6)}
            if d.params:
                out["params"] = {k: _param_json(v) for k, v in d.params.items()}
            if intervals:
                out["interval"] = list(eval_interval(d.value, 64).to_floats())
            if d.children:
                out["children"] = [enc(c) for c in d.children]
            if d.aux:
                out["aux"] = [enc(c) for c in d.aux]
            if d.impl is not None:
                out["impl"] = enc(d.impl)
            return out

        return enc(self)


def _param_json(v):
    if isinstance(v, Fraction):
        return format_rat(v)
    return v


# ---- value expressions with light folding ----

def _v_mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    if isinstance(a, Num) and a.value == 1:
        return b
    if isinstance(b, Num) and b.value == 1:
        return a
    if isinstance(a, Sqrt) and isinstance(b, Sqrt) and a.arg is b.arg:
        return a.arg
    return Bin("*", a, b)


def _v_div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value / b.value)
    if isinstance(b, Num) and b.value == 1:
        return a
    return Bin("/", a, b)


def _v_add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return Bin("+", a, b)


def _v_sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    return Bin("-", a, b)


def _v_sqrt(a: Expr) -> Expr:
    if isinstance(a, Num):
        r = rational_sqrt(a.value)
        if r is not None:
            return Num(r)
    return Sqrt(a)


def _sqrt2plus_factor(n: int) -> Expr:
    return _v_sqrt(Num(2 + Fraction(2, n)))


# ---- the deriver ----

class _Deriver:
    def __init__(self, n: int):
        self.n = n
        self.memo: dict[tuple, Derivation] = {}
        self.rationals: dict[Fraction, Derivation] = {}
        self.one = self._node(AXIOM_1, Num(_ONE), ())

    def _node(self, rule, value, children, params=None, aux=None, impl=None) -> Derivation:
        params = params or {}
        key = (rule, tuple(id(c) for c in children), tuple(sorted(params.items())))
        d = self.memo.get(key)
        if d is None:
            d = Derivation(rule, value, self.n, tuple(children), params)
            self.memo[key] = d
            # aux/impl are built after registration; none of them loops back to d
            if aux is not None:
                d.aux = tuple(aux())
            if impl is not None:
                d.impl = impl()
        return d

    # comparisons on values

    def cmp(self, a: Derivation, b: Derivation) -> int:
        if a is b:
            return 0
        if a.exact is not None and b.exact is not None:
            return (a.exact > b.exact) - (a.exact < b.exact)
        return iv.sign(Bin("-", a.value, b.value), _CMP_BITS)

    def sign(self, e: Expr) -> int:
        v = exact_value(e)
        if v is not None:
            return (v > 0) - (v < 0)
        return iv.sign(e, _CMP_BITS)

    # primitive rules

    def zero(self) -> Derivation:
        return self._node(AXIOM_0, Num(Fraction(0)), ())

    def rational(self, q: Fraction) -> Derivation:
        q = Fraction(q)
        if q < 0:
            raise NegativeDistance(f"{format_rat(q)} is negative")
        hit = self.rationals.get(q)
        if hit is not None:
            return hit
        if q == 0:
            d = self.zero()
        elif q == 1:
            d = self.one
        else:
            d = self._raw_times(q.numerator, self.one)
            if q.denominator > 1:
                d = self._raw_div(q.denominator, d)
        self.rationals[q] = d
        return d

    def _raw_times(self, k: int, c: Derivation) -> Derivation:
        if k == 1:
            return c
        if c.rule == R_TIMES_K:
            k, c = k * c.params["k"], c.children[0]
        value = _v_mul(Num(Fraction(k)), c.value)
        if k == 2:
            aux = lambda: (self.sqrt2plus(c), self.sqrt2plus(self.sqrt2plus(c)))
        else:
            aux = lambda: (self.times_k(2, c),)
        return self._node(R_TIMES_K, value, (c,), {"k": k}, aux)

    def _raw_div(self, k: int, c: Derivation) -> Derivation:
        if k == 1:
            return c
        value = _v_div(c.value, Num(Fraction(k)))
        aux = lambda: (self.times_k(k, c), self.times_k(k - 1, c))
        return self._node(R_DIV_K, value, (c,), {"k": k}, aux)

    def times_k(self, k: int, c: Derivation) -> Derivation:
        if c.exact is not None:
            return self.rational(k * c.exact)
        if k == 1:
            return c
        if k == 2 and c.rule != R_TIMES_K:
            return self.double(c)
        return self._raw_times(k, c)

    def div_k(self, k: int, c: Derivation) -> Derivation:
        if c.exact is not None:
            return self.rational(c.exact / k)
        return self._raw_div(k, c)

    def scale(self, q: Fraction, c: Derivation) -> Derivation:
        q = abs(Fraction(q))
        if q == 0:
            return self.zero()
        return self.div_k(q.denominator, self.times_k(q.numerator, c))

    def double(self, c: Derivation) -> Derivation:
        if c.exact is not None:
            return self.rational(2 * c.exact)
        aux = lambda: (self.sqrt2plus(c), self.sqrt2plus(self.sqrt2plus(c)))
        return self._node(R_DOUBLE, _v_mul(Num(Fraction(2)), c.value), (c,), None, aux)

    def sqrt2plus(self, c: Derivation) -> Derivation:
        return self._node(R_SQRT2PLUS, _v_mul(_sqrt2plus_factor(self.n), c.value), (c,))

    def pyth_minus(self, a: Derivation, b: Derivation) -> Derivation:
        if self.cmp(a, b) <= 0 or self.sign(b.value) <= 0:
            raise NoDerivation("right-triangle rule needs a > b > 0")
        value = _v_sqrt(_v_sub(_v_mul(a.value, a.value), _v_mul(b.value, b.value)))
        return self._node(R_PYTH_MINUS, value, (a, b), None, lambda: (self.double(b),))

    def sqrt2_times(self, a: Derivation) -> Derivation:
        return self.pyth_minus(self.pyth_minus(self.double(a), a), a)

    def pyth_plus(self, a: Derivation, b: Derivation) -> Derivation:
        """sqrt(a^2 + b^2) = sqrt((sqrt2*a)^2 - sqrt(a^2 - b^2)^2), larger leg as a."""
        s = self.cmp(a, b)
        if s == 0:
            return self.sqrt2_times(a)
        if s < 0:
            a, b = b, a
        return self.pyth_minus(self.sqrt2_times(a), self.pyth_minus(a, b))

    def minus(self, a: Derivation, b: Derivation) -> Derivation:
        if a.exact is not None and b.exact is not None:
            return self.rational(a.exact - b.exact)
        s = self.cmp(a, b)
        if s == 0:
            return self.zero()
        if s < 0:
            raise NoDerivation("difference rule needs a > b")
        if self.sign(b.value) == 0:
            return a
        value = _v_sub(a.value, b.value)

        def aux():
            rz = self.pyth_minus(self.one, self.rational(Fraction(1, self.n)))
            return (self.sqrt2plus(self.one), self.pyth_plus(a, rz), self.pyth_plus(b, rz),
                    self.teps(b, value))

        return self._node(R_MINUS, value, (a, b), None, aux)

    def plus(self, a: Derivation, b: Derivation) -> Derivation:
        if a.exact is not None and b.exact is not None:
            return self.rational(a.exact + b.exact)
        if self.sign(b.value) == 0:
            return a
        if self.sign(a.value) == 0:
            return b
        s = self.cmp(a, b)
        big, small = (a, b) if s >= 0 else (b, a)

        def impl():
            if s == 0:
                return self.double(a)
            return self.minus(self.double(big), self.minus(big, small))

        return self._node(R_PLUS, _v_add(a.value, b.value), (a, b), None, None, impl)

    def muldiv(self, a: Derivation, b: Derivation, c: Derivation) -> Derivation:
        if a.exact is not None and b.exact is not None and c.exact is not None:
            return self.rational(a.exact * b.exact / c.exact)
        for x in (a, b, c):
            if self.sign(x.value) <= 0:
                raise NoDerivation("product-quotient rule needs positive a, b, c")
        if self.cmp(a, c) == 0:
            return b
        if self.cmp(b, c) == 0:
            return a
        m = self._least_m(b, c)
        value = _v_div(_v_mul(a.value, b.value), c.value)

        def aux():
            hi, lo = (a, c) if self.cmp(a, c) > 0 else (c, a)
            return (self.times_k(m, a), self.times_k(m, c), self.times_k(m, self.minus(hi, lo)))

        return self._node(R_MULDIV, value, (a, b, c), {"m": m}, aux)

    def _least_m(self, b: Derivation, c: Derivation) -> int:
        bi, ci = iv.eval_at(b.value, 64), iv.eval_at(c.value, 64)
        m = max(1, math.floor(bi.lo / (2 * ci.hi)))
        while iv.sign(Bin("-", _v_mul(Num(Fraction(2 * m)), c.value), b.value), _CMP_BITS) <= 0:
            m += 1
        return m

    def sqrt(self, a: Derivation) -> Derivation:
        """sqrt(a) = (1/2) sqrt((a+1)^2 - (a-1)^2) for a > 1; 1/sqrt(1/a) for a < 1."""
        if a.exact is not None:
            return self.sqrt_rational(a.exact)
        s = self.cmp(a, self.one)
        if s == 0:
            return self.one
        one = self.one
        if s > 0:
            impl = lambda: self.div_k(2, self.pyth_minus(self.plus(a, one), self.minus(a, one)))
        else:
            impl = lambda: self.muldiv(one, one, self.sqrt(self.muldiv(one, one, a)))
        return self._node(R_SQRT, _v_sqrt(a.value), (a,), None, None, impl)

    def sqrt_rational(self, q: Fraction) -> Derivation:
        """sqrt(q) = sqrt(((q+1)/2)^2 - ((q-1)/2)^2); sqrt(2) via sqrt(3)."""
        if q < 0:
            raise DomainError(f"square root of {format_rat(q)}")
        r = rational_sqrt(q)
        if r is not None:
            return self.rational(r)
        if q == 2:
            return self.pyth_minus(self.sqrt_rational(Fraction(3)), self.one)
        return self.pyth_minus(self.rational((q + 1) / 2), self.rational(abs(q - 1) / 2))

    def teps(self, eps: Derivation, D: Expr) -> Derivation:
        """Approximation set T_xy(eps) for a pair at distance D, with rational legs."""
        r2 = _half_leg(eps, D)
        r1 = _near_rational(D, r2)
        value = D
        aux = lambda: (self.rational(r1), self.rational(r2))
        return self._node(T_EPS, value, (eps,), {"r1": r1, "r2": r2}, aux)

    # expressions

    def derive_abs(self, e: Expr, memo: dict) -> Derivation:
        key = id(e)
        if key not in memo:
            memo[key] = self._abs(e, memo)
        return memo[key]

    def _abs(self, e: Expr, memo: dict) -> Derivation:
        v = exact_value(e)
        if v is not None:
            return self.rational(abs(v))
        if isinstance(e, Sqrt):
            s = self.sign(e.arg)
            if s < 0:
                raise DomainError("square root of a negative value")
            if s == 0:
                return self.zero()
            inner = exact_value(e.arg)
            if inner is not None:
                return self.sqrt_rational(inner)
            return self.sqrt(self.derive_abs(e.arg, memo))
        if self.sign(e) == 0:
            return self.zero()
        if e.op in "+-":
            return self._additive(e, memo)
        a, b = e.left, e.right
        qa, qb = exact_value(a), exact_value(b)
        if e.op == "*":
            if qa is not None:
                return self.scale(qa, self.derive_abs(b, memo))
            if qb is not None:
                return self.scale(qb, self.derive_abs(a, memo))
            return self.muldiv(self.derive_abs(a, memo), self.derive_abs(b, memo), self.one)
        if qb is not None:
            return self.scale(1 / qb, self.derive_abs(a, memo))
        return self.muldiv(self.derive_abs(a, memo), self.one, self.derive_abs(b, memo))

    def _additive(self, e: Expr, memo: dict) -> Derivation:
        terms: list[tuple[int, Expr]] = []
        stack = [(1, e)]
        while stack:
            s, x = stack.pop()
            if isinstance(x, Bin) and x.op in "+-" and exact_value(x) is None:
                stack.append((s if x.op == "+" else -s, x.right))
                stack.append((s, x.left))
            else:
                terms.append((s, x))
        const = Fraction(0)
        pos: list[Derivation] = []
        neg: list[Derivation] = []
        for s, x in terms:
            v = exact_value(x)
            if v is not None:
                const += s * v
                continue
            sg = self.sign(x)
            if sg == 0:
                continue
            (pos if s * sg > 0 else neg).append(self.derive_abs(x, memo))
        if const > 0:
            pos.append(self.rational(const))
        elif const < 0:
            neg.append(self.rational(-const))
        P = self._sum(pos)
        N = self._sum(neg)
        if N is None:
            return P if P is not None else self.zero()
        if P is None:
            return N
        s = self.cmp(P, N)
        if s == 0:
            return self.zero()
        return self.minus(P, N) if s > 0 else self.minus(N, P)

    def _sum(self, items: list[Derivation]) -> Derivation | None:
        if not items:
            return None
        acc = items[0]
        for x in items[1:]:
            acc = self.plus(acc, x)
        return acc


def _lower(e: Expr) -> Fraction:
    return iv.eval_at(e, 192).lo


def _dyadic_below(x: Fraction) -> Fraction:
    """Largest power of two that is <= x (x > 0)."""
    k = x.numerator.bit_length() - x.denominator.bit_length()
    p = Fraction(2) ** k
    while p > x:
        p /= 2
    while 2 * p <= x:
        p *= 2
    return p


def _half_leg(eps: Derivation, D: Expr) -> Fraction:
    """|zy|: eps/2 when eps is rational, else a power of two below it; capped at D/2."""
    half_eps = eps.exact / 2 if eps.exact is not None else None
    dv = exact_value(D)
    half_d = dv / 2 if dv is not None else None
    if half_eps is not None and half_d is not None:
        return min(half_eps, half_d)
    lo_eps = half_eps if half_eps is not None else _lower(eps.value) / 2
    lo_d = half_d if half_d is not None else _lower(D) / 2
    if half_eps is not None and half_eps <= lo_d:
        return half_eps
    if half_d is not None and half_d <= lo_eps:
        return half_d
    return _dyadic_below(min(lo_eps, lo_d))


def _convergents(x: Fraction) -> Iterator[Fraction]:
    h0, h1, k0, k1 = 0, 1, 1, 0
    num, den = x.numerator, x.denominator
    while den:
        a, r = divmod(num, den)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield Fraction(h1, k1)
        num, den = den, r


def _near_rational(D: Expr, tol: Fraction) -> Fraction:
    """First continued-fraction convergent provably within ``tol`` of D."""
    dv = exact_value(D)
    if dv is not None:
        target = Interval(dv, dv)
    else:
        bits = max(64, 16 - (tol.numerator.bit_length() - tol.denominator.bit_length()))
        target = eval_interval(D, bits)
    for c in _convergents(target.mid):
        if target.hi - tol <= c <= target.lo + tol and c > 0:
            return c
    return target.mid


# ---- public API ----

def derive(e: Expr | str, n: int = 8) -> Derivation:
    """Derivation of |e| in D_n; a pure function of (e, n)."""
    if isinstance(e, str):
        e = parse_expr(e)
    if not isinstance(n, int) or n < 2:
        raise BadParameter(f"n must be an integer >= 2, got {n!r}")
    v = exact_value(e)
    if v is not None and v < 0:
        raise NegativeDistance(f"{format_rat(v)} is negative")
    if v is None:
        ie = eval_interval(e, 64)
        if ie.hi < 0:
            raise NegativeDistance(f"value is negative, about {float(ie.hi):.6g}")
        if ie.lo < 0 and iv.sign(e, _CMP_BITS) < 0:
            raise NegativeDistance("value is negative")
    dv = _Deriver(n)
    d = dv.derive_abs(e, {})
    _confirm_root(e, d)
    return d


def _confirm_root(e: Expr, d: Derivation) -> None:
    v = exact_value(e)
    if v is not None and d.exact is not None:
        if d.exact != v:
            raise NoDerivation(f"derived {format_rat(d.exact)} for {format_rat(v)}")
        return
    a, b = eval_interval(e, 64), eval_interval(d.value, 64)
    slack = Fraction(1, 1 << 60) * max(_ONE, a.magnitude())
    if a.lo - slack > b.hi or b.lo - slack > a.hi:
        raise NoDerivation("derived value does not match the expression")


# ---- size accounting ----

@dataclass
class SizeAccount:
    points: int
    edges: int
    rule_counts: dict[str, int]     # applications in the fully unfolded union
    nodes: int                      # distinct derivation nodes
    tree_rules: dict[str, int]      # distinct derivation nodes per rule

    def to_json(self) -> dict:
        return {"schema": 1, "points": self.points, "unit_edges": self.edges,
                "rule_counts": self.rule_counts, "nodes": self.nodes,
                "tree_rules": self.tree_rules}


def _union(own: int, rule: str, subs: list[tuple[int, tuple]]) -> tuple:
    pts, edges = own, 0
    counts: Counter = Counter({rule: 1})
    for mult, (p, e, c) in subs:
        pts += mult * (p - 2)
        edges += mult * e
        for k, v in c.items():
            counts[k] += mult * v
    return pts, edges, counts


def _sizes(d: Derivation, memo: dict) -> tuple[int, int, Counter]:
    hit = memo.get(id(d))
    if hit is not None:
        return hit
    n = d.n
    S = lambda x: _sizes(x, memo)
    r = d.rule
    if r == AXIOM_0:
        out = (1, 0, Counter({AXIOM_0: 1}))
    elif r == AXIOM_1:
        out = (2, 1, Counter({AXIOM_1: 1}))
    elif d.impl is not None:
        p, e, c = S(d.impl)
        out = (p, e, c + Counter({r: 1}))
    elif r == R_SQRT2PLUS:
        out = _union(2 * n + 3, r, [(n * n + 3 * n + 1, S(d.children[0]))])
    elif r == R_DOUBLE or (r == R_TIMES_K and d.params["k"] == 2):
        c = d.children[0]
        out = _union(4, r, [(2, S(c)), (1, _z_sizes(c, d.aux[0], memo)), (1, S(d.aux[1]))])
    elif r == R_TIMES_K:
        k = d.params["k"]
        out = _union(k + 1, r, [(k, S(d.children[0])), (k - 1, S(d.aux[0]))])
    elif r == R_DIV_K:
        out = _union(5, r, [(3, S(d.children[0])), (2, S(d.aux[1])), (2, S(d.aux[0]))])
    elif r == R_PYTH_MINUS:
        a, b = d.children
        out = _union(4, r, [(2, S(b)), (1, S(d.aux[0])), (2, S(a))])
    elif r == R_MINUS:
        simplex, xp, yp, t = d.aux
        out = _union(n + 3, r, [(n * (n - 1) // 2, S(simplex)), (n, S(xp)), (n, S(yp)), (1, S(t))])
    elif r == R_MULDIV:
        ma, mc, mdiff = d.aux
        out = _union(5, r, [(2, S(ma)), (2, S(mc)), (2, S(mdiff)), (1, S(d.children[1]))])
    elif r == T_EPS:
        out = _union(3, r, [(1, S(d.aux[0])), (1, S(d.aux[1]))])
    else:
        raise NoDerivation(f"no size rule for {r}")
    memo[id(d)] = out
    return out


def _z_sizes(c: Derivation, sqrt2plus_c: Derivation, memo: dict) -> tuple:
    """Z_xy for |xy| = (2/n) c: the simplex bound set; for n = 2 it is S_xy itself."""
    key = ("Z", id(c))
    hit = memo.get(key)
    if hit is not None:
        return hit
    n = c.n
    if n == 2:
        p, e, cnt = _sizes(c, memo)
        out = (p, e, cnt + Counter({Z_BOUND: 1}))
    else:
        out = _union(n + 2, Z_BOUND, [(2 * n, _sizes(c, memo)),
                                      (n * (n - 1) // 2, _sizes(sqrt2plus_c, memo))])
    memo[key] = out
    return out


def size_account(d: Derivation) -> SizeAccount:
    p, e, c = _sizes(d, {})
    tree = d.tree_rules()
    return SizeAccount(points=p, edges=e, rule_counts=dict(sorted(c.items())),
                       nodes=sum(tree.values()), tree_rules=dict(sorted(tree.items())))


# ---- soundness check ----

@dataclass
class CheckReport:
    bits: tuple[int, ...]
    nodes: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"schema": 1, "ok": self.ok, "bits": list(self.bits), "nodes": self.nodes,
                "failures": self.failures}


def _formula(d: Derivation, I, w: int) -> Interval | None:
    """The rule's formula over the children's intervals."""
    r, n = d.rule, d.n
    k = lambda v: iv.point(Fraction(v))
    if r == AXIOM_0:
        return k(0)
    if r == AXIOM_1:
        return k(1)
    ch = [I(c) for c in d.children]
    if r == R_SQRT2PLUS:
        return iv.mul(iv.sqrt(k(2 + Fraction(2, n)), w), ch[0], w)
    if r == R_DOUBLE:
        return iv.mul(k(2), ch[0], w)
    if r == R_TIMES_K:
        return iv.mul(k(d.params["k"]), ch[0], w)
    if r == R_DIV_K:
        return iv.div(ch[0], k(d.params["k"]), w)
    if r == R_PYTH_MINUS:
        a, b = ch
        return iv.sqrt(iv.sub(iv.mul(a, a, w), iv.mul(b, b, w), w), w)
    if r == R_MINUS:
        return iv.sub(ch[0], ch[1], w)
    if r == R_PLUS:
        return iv.add(ch[0], ch[1], w)
    if r == R_MULDIV:
        return iv.div(iv.mul(ch[0], ch[1], w), ch[2], w)
    if r == R_SQRT:
        return iv.sqrt(ch[0], w)
    return None


def _preconditions(d: Derivation, I, w: int) -> list[str]:
    r = d.rule
    out = []
    gt = lambda x, y: x.lo > y.hi
    zero = iv.point(Fraction(0))
    ch = [I(c) for c in d.children]
    aux = [I(c) for c in d.aux]
    near = lambda x, y: x.overlaps(y)
    if r == R_PYTH_MINUS:
        a, b = ch
        if not (gt(a, b) and gt(b, zero)):
            out.append("needs a > b > 0")
        if not near(aux[0], iv.mul(iv.point(Fraction(2)), b, w)):
            out.append("aux is not 2b")
    elif r == R_MINUS:
        a, b = ch
        if not (gt(a, b) and gt(b, zero)):
            out.append("needs a > b > 0")
        rz2 = iv.point(1 - Fraction(1, d.n * d.n))
        for slot, leg in ((1, a), (2, b)):
            want = iv.sqrt(iv.add(iv.mul(leg, leg, w), rz2, w), w)
            if not near(aux[slot], want):
                out.append(f"aux {_AUX[r][slot]} has the wrong value")
        if not near(aux[0], iv.sqrt(iv.point(2 + Fraction(2, d.n)), w)):
            out.append("simplex edge has the wrong value")
        t = d.aux[3]
        if t.children[0] is not d.children[1]:
            out.append("approximation set not built for b")
    elif r == R_MULDIV:
        a, b, c = ch
        m = d.params["m"]
        if not all(gt(x, zero) for x in ch):
            out.append("needs positive a, b, c")
        if not gt(iv.mul(iv.point(Fraction(2 * m)), c, w), b):
            out.append(f"b < 2mc fails for m = {m}")
        for slot, want in ((0, iv.mul(iv.point(Fraction(m)), a, w)),
                           (1, iv.mul(iv.point(Fraction(m)), c, w))):
            if not near(aux[slot], want):
                out.append(f"aux {_AUX[r][slot]} has the wrong value")
        diff = iv.sub(a, c, w)
        absdiff = diff if diff.lo >= 0 else (iv.sub(c, a, w) if diff.hi <= 0 else None)
        if absdiff is not None and not near(aux[2], iv.mul(iv.point(Fraction(m)), absdiff, w)):
            out.append("aux m*|a-c| has the wrong value")
    elif r == R_SQRT:
        if not gt(ch[0], zero):
            out.append("needs a > 0")
    elif r in (R_DIV_K, R_TIMES_K):
        k = d.params["k"]
        if not (isinstance(k, int) and k >= 2):
            out.append(f"k = {k} is not an integer >= 2")
        c = ch[0]
        wants = [(0, k), (1, k - 1)] if r == R_DIV_K else ([] if k == 2 else [(0, 2)])
        for slot, mult in wants:
            if not near(aux[slot], iv.mul(iv.point(Fraction(mult)), c, w)):
                out.append(f"aux {_AUX[r][slot]} has the wrong value")
    elif r == T_EPS:
        r1, r2 = d.params["r1"], d.params["r2"]
        D = I(d)
        eps = ch[0]
        if not (r1 > 0 and r2 > 0):
            out.append("legs must be positive")
        if not 2 * r2 <= eps.lo:
            out.append("|zy| exceeds eps/2")
        if not (D.hi >= abs(r1 - r2) and D.lo <= r1 + r2):
            out.append("legs violate the triangle inequality")
        if aux[0].lo != r1 or aux[1].lo != r2:
            out.append("leg derivations have the wrong values")
    return out


def check(d: Derivation, bits=(64, 256)) -> CheckReport:
    """Interval soundness: each node's enclosure lies inside its formula's enclosure."""
    bits = tuple(bits)
    nodes = list(d.walk())
    rep = CheckReport(bits, len(nodes))
    for b in bits:
        cache: dict[int, Interval] = {}
        fine: dict[int, Interval] = {}

        def I(x: Derivation) -> Interval:
            if id(x) not in cache:
                cache[id(x)] = eval_interval(x.value, b)
            return cache[id(x)]

        w = b + 16
        for k, node in enumerate(nodes):
            tag = f"node {k} ({node.rule}, {node.label()}) at {b} bits"
            try:
                F = _formula(node, I, w)
                if node.impl is not None and not I(node.impl).overlaps(I(node)):
                    rep.failures.append(f"{tag}: construction value differs")
                if F is not None:
                    own = fine.setdefault(id(node), eval_interval(node.value, b + 32))
                    if not F.contains(own):
                        rep.failures.append(f"{tag}: formula enclosure {F} misses {own}")
                for msg in _preconditions(node, I, w):
                    rep.failures.append(f"{tag}: {msg}")
            except (DomainError, ZeroDivisionError) as exc:
                rep.failures.append(f"{tag}: {exc}")
    return rep


def _aux_name(d: Derivation, i: int) -> str:
    rule = R_DOUBLE if d.rule == R_TIMES_K and d.params["k"] == 2 else d.rule
    return _AUX[rule][i]


def render(d: Derivation, bits: int = 64) -> str:
    """Indented tree: rule, value, enclosure; shared nodes are printed once."""
    ids: dict[int, int] = {}
    lines: list[str] = []
    stack: list[tuple[Derivation, int, str]] = [(d, 0, "")]
    while stack:
        node, depth, role = stack.pop()
        pad = "  " * depth + (role + ": " if role else "")
        if id(node) in ids:
            lines.append(f"{pad}#{ids[id(node)]} {node.rule} = {node.label()} (see above)")
            continue
        ids[id(node)] = len(ids)
        lo, hi = eval_interval(node.value, bits).to_floats()
        params = "".join(f" {k}={_param_json(v)}" for k, v in node.params.items())
        lines.append(f"{pad}#{ids[id(node)]} {node.rule}{params} = {node.label()}  [{lo:.15g}, {hi:.15g}]")
        kids = [(c, depth + 1, "") for c in node.children]
        kids += [(c, depth + 1, "aux " + _aux_name(node, i)) for i, c in enumerate(node.aux)]
        if node.impl is not None:
            kids.append((node.impl, depth + 1, "via"))
        stack.extend(reversed(kids))
    return "\n".join(lines)
