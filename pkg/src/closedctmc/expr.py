"""Symbolic rate expressions.

A small immutable expression tree over rate symbols.  Only flattening of
nested sums/products is done at construction time; algebraic equality is
checked numerically with :func:`equivalent` instead of by normal forms.
Subexpressions may be shared, so evaluation and rendering memoize per call.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np


class UnboundSymbol(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unbound symbol '{self.name}'"


class NonFiniteResult(ArithmeticError):
    pass


class RateExpr:
    __slots__ = ()

    def __add__(self, other):
        return add(self, _lift(other))

    def __radd__(self, other):
        return add(_lift(other), self)

    def __mul__(self, other):
        return mul(self, _lift(other))

    def __rmul__(self, other):
        return mul(_lift(other), self)

    def __truediv__(self, other):
        return div(self, _lift(other))

    def __rtruediv__(self, other):
        return div(_lift(other), self)

    def __str__(self):
        return render(self)


@dataclass(frozen=True, eq=True, repr=True)
class Const(RateExpr):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        if not (math.isfinite(self.value) and self.value >= 0):
            raise ValueError(f"constant must be finite and non-negative, got {self.value!r}")


@dataclass(frozen=True)
class Sym(RateExpr):
    name: str


@dataclass(frozen=True)
class Sum(RateExpr):
    terms: tuple[RateExpr, ...]

    def __post_init__(self):
        if len(self.terms) < 2:
            raise ValueError("Sum needs at least two terms")
        if any(isinstance(t, Sum) for t in self.terms):
            raise ValueError("Sum terms must be flattened")


@dataclass(frozen=True)
class Prod(RateExpr):
    factors: tuple[RateExpr, ...]

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("Prod needs at least two factors")
        if any(isinstance(f, Prod) for f in self.factors):
            raise ValueError("Prod factors must be flattened")


@dataclass(frozen=True)
class Quot(RateExpr):
    num: RateExpr
    den: RateExpr

    def __post_init__(self):
        if self.den == Const(0):
            raise ValueError("division by the constant 0")


@dataclass(frozen=True)
class Recip(RateExpr):
    arg: RateExpr

    def __post_init__(self):
        if self.arg == Const(0):
            raise ValueError("reciprocal of the constant 0")


ONE = Const(1)


def _lift(x) -> RateExpr:
    if isinstance(x, RateExpr):
        return x
    if isinstance(x, str):
        return Sym(x)
    return Const(float(x))


def add(*terms) -> RateExpr:
    flat: list[RateExpr] = []
    for t in map(_lift, terms):
        flat.extend(t.terms if isinstance(t, Sum) else (t,))
    return flat[0] if len(flat) == 1 else Sum(tuple(flat))


def mul(*factors) -> RateExpr:
    """Product with nested products flattened and unit constants dropped."""
    flat: list[RateExpr] = []
    for f in map(_lift, factors):
        flat.extend(f.factors if isinstance(f, Prod) else (f,))
    flat = [f for f in flat if f != ONE] or [ONE]
    return flat[0] if len(flat) == 1 else Prod(tuple(flat))


def div(num, den) -> RateExpr:
    num, den = _lift(num), _lift(den)
    return num if den == ONE else Quot(num, den)


def symbols(expr: RateExpr) -> set[str]:
    found: set[str] = set()
    seen: set[int] = set()
    stack = [expr]
    while stack:
        e = stack.pop()
        if id(e) in seen:
            continue
        seen.add(id(e))
        if isinstance(e, Sym):
            found.add(e.name)
        else:
            stack.extend(_children(e))
    return found


def _children(e: RateExpr) -> tuple[RateExpr, ...]:
    if isinstance(e, Sum):
        return e.terms
    if isinstance(e, Prod):
        return e.factors
    if isinstance(e, Quot):
        return (e.num, e.den)
    if isinstance(e, Recip):
        return (e.arg,)
    return ()


def evaluate(expr: RateExpr, bindings: Mapping[str, float]) -> float:
    memo: dict[int, float] = {}

    def ev(e):
        key = id(e)
        if key in memo:
            return memo[key]
        if isinstance(e, Const):
            v = e.value
        elif isinstance(e, Sym):
            try:
                v = float(bindings[e.name])
            except KeyError:
                raise UnboundSymbol(e.name) from None
        elif isinstance(e, Sum):
            v = math.fsum(ev(t) for t in e.terms)
        elif isinstance(e, Prod):
            v = 1.0
            for f in e.factors:
                v *= ev(f)
        elif isinstance(e, Quot):
            v = _divide(ev(e.num), ev(e.den))
        elif isinstance(e, Recip):
            v = _divide(1.0, ev(e.arg))
        else:
            raise TypeError(f"not a rate expression: {e!r}")
        if not math.isfinite(v):
            raise NonFiniteResult(f"non-finite value while evaluating {type(e).__name__}")
        memo[key] = v
        return v

    return ev(expr)


def _divide(a: float, b: float) -> float:
    if b == 0.0:
        raise NonFiniteResult("denominator evaluated to zero")
    return a / b


# Rendering.  Precedence: atoms and reciprocals bind tightest, then
# products/quotients, then sums.

def _fmt_const(x: float) -> str:
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def render(expr: RateExpr) -> str:
    memo: dict[int, str] = {}

    def r(e):
        key = id(e)
        if key in memo:
            return memo[key]
        if isinstance(e, Const):
            s = _fmt_const(e.value)
        elif isinstance(e, Sym):
            s = e.name
        elif isinstance(e, Sum):
            s = " + ".join(sorted(r(t) for t in e.terms))
        elif isinstance(e, Prod):
            parts = [f"({r(f)})" if isinstance(f, (Sum, Quot)) else r(f) for f in e.factors]
            s = "*".join(sorted(parts))
        elif isinstance(e, Quot):
            num = f"({r(e.num)})" if isinstance(e.num, (Sum, Quot)) else r(e.num)
            den = f"({r(e.den)})" if isinstance(e.den, (Sum, Prod, Quot)) else r(e.den)
            s = f"{num}/{den}"
        elif isinstance(e, Recip):
            s = f"({r(e.arg)})^-1"
        else:
            raise TypeError(f"not a rate expression: {e!r}")
        memo[key] = s
        return s

    return r(expr)


_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
                    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<pow>\^-1)|(?P<op>[-+*/()]))")


def read(text: str) -> RateExpr:
    """Parse the output of :func:`render` back into an expression."""
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
        pos = m.end()
    tokens.append(("end", ""))
    i = 0

    def peek():
        return tokens[i]

    def take(value=None):
        nonlocal i
        tok = tokens[i]
        if value is not None and tok[1] != value:
            raise ValueError(f"expected {value!r}, got {tok[1]!r}")
        i += 1
        return tok

    def expr_():
        terms = [term()]
        while peek() == ("op", "+"):
            take()
            terms.append(term())
        return add(*terms)

    def term():
        acc = factor()
        while peek()[1] in ("*", "/") and peek()[0] == "op":
            op = take()[1]
            rhs = factor()
            acc = _raw_mul(acc, rhs) if op == "*" else Quot(acc, rhs)
        return acc

    def factor():
        kind, val = take()
        if kind == "num":
            node = Const(float(val))
        elif kind == "ident":
            node = Sym(val)
        elif (kind, val) == ("op", "("):
            node = expr_()
            take(")")
        else:
            raise ValueError(f"unexpected token {val!r}")
        while peek()[0] == "pow":
            take()
            node = Recip(node)
        return node

    out = expr_()
    if peek()[0] != "end":
        raise ValueError(f"trailing input at token {peek()[1]!r}")
    return out


def _raw_mul(a: RateExpr, b: RateExpr) -> RateExpr:
    # flattening without dropping unit factors, so read(render(e)) keeps e's shape
    fa = a.factors if isinstance(a, Prod) else (a,)
    fb = b.factors if isinstance(b, Prod) else (b,)
    return Prod(fa + fb)


def sample_rates(names: Iterable[str], rng: np.random.Generator,
                 low: float = 1e-3, high: float = 1e3) -> dict[str, float]:
    """Log-uniform positive values for each symbol, in sorted symbol order."""
    names = sorted(set(names))
    draws = np.exp(rng.uniform(math.log(low), math.log(high), size=len(names)))
    return dict(zip(names, draws.tolist()))


def equivalent(a: RateExpr, b: RateExpr, trials: int = 32, seed: int = 0,
               tol: float = 1e-9, low: float = 1e-3, high: float = 1e3) -> bool:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    names = symbols(a) | symbols(b)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        sigma = sample_rates(names, rng, low, high)
        va, vb = evaluate(a, sigma), evaluate(b, sigma)
        if abs(va - vb) > tol * max(1.0, abs(va)):
            return False
    return True

