"""Closed-form steady state for decision/sequential models.

Every non-root state k has a single entering edge p -> k with rate r, so
flow balance at k reads ``pi_k * exit(k) = r * pi_p``.  Walking the states
root-outwards expresses each ``pi_k`` as ``c_k * pi_root``; normalization
then gives ``pi_root = 1 / sum(c_k)`` with ``c_root = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .expr import ONE, Const, RateExpr, Recip, Sym, add, div, evaluate, mul
from .model import Model, StateRef
from .structure import Decomposition, classify


@dataclass(frozen=True)
class Derivation:
    root: int
    names: tuple[str, ...]
    coeffs: dict[int, RateExpr]
    pi0: RateExpr
    availability_expr: RateExpr

    def index_of(self, k: StateRef) -> int:
        if isinstance(k, str):
            try:
                return self.names.index(k)
            except ValueError:
                raise KeyError(f"unknown state '{k}'") from None
        if k not in self.coeffs:
            raise KeyError(f"state index {k} out of range")
        return k

    def evaluate(self, bindings: Mapping[str, float]) -> np.ndarray:
        """Numeric probability vector in state-index order."""
        c = np.array([evaluate(self.coeffs[i], bindings) for i in range(len(self.names))])
        return c / c.sum()


def _exit_expr(model: Model, k: int) -> RateExpr:
    return add(*(Sym(t.rate) for t in model.outgoing(k)))


def derive_tree(model: Model, d: Optional[Decomposition] = None) -> Derivation:
    if d is None:
        d = classify(model)
    coeffs: dict[int, RateExpr] = {d.root: ONE}
    for k in d.order:
        edge = d.parent[k]
        coeffs[k] = div(mul(coeffs[edge.src], Sym(edge.rate)), _exit_expr(model, k))

    ordered = [coeffs[i] for i in range(model.n)]
    total = add(*ordered)
    up = [coeffs[s.index] for s in model.states if s.up]
    up_sum = add(*up) if up else Const(0)
    return Derivation(
        root=d.root,
        names=model.names,
        coeffs=coeffs,
        pi0=Recip(total),
        availability_expr=div(up_sum, total),
    )


def express_state(deriv: Derivation, k: StateRef) -> RateExpr:
    """Absolute probability of state ``k`` as ``c_k * pi0``."""
    i = deriv.index_of(k)
    return mul(deriv.coeffs[i], deriv.pi0)


def derive_hub(n: int, lambdas: Sequence[str], mus: Sequence[str]) -> RateExpr:
    """Root probability of a hub: root -> i at ``lambdas[i]``, i -> root at ``mus[i]``."""
    if n < 1 or len(lambdas) != n or len(mus) != n:
        raise ValueError("need n >= 1 and exactly n arrival and n return rates")
    return Recip(add(ONE, *(div(Sym(lam), Sym(mu)) for lam, mu in zip(lambdas, mus))))


def derive_cycle_rates(rates: Sequence[str]) -> RateExpr:
    """Root probability of the cycle 0 -> 1 -> ... -> m -> 0.

    ``rates[i]`` is the rate leaving state i.  The sum of reciprocals runs
    over the states after the root only.
    """
    if len(rates) < 2:
        raise ValueError("a cycle needs at least two states")
    first = Sym(rates[0])
    rest = add(*(div(ONE, Sym(r)) for r in rates[1:]))
    return Recip(add(ONE, mul(first, rest)))


def derive_cycle_sojourn(sojourns: Sequence[float]) -> float:
    """Time fraction of state 0 in a cycle with mean holding times ``sojourns``."""
    s = [float(x) for x in sojourns]
    if not s or any(not x > 0 for x in s):
        raise ValueError("sojourn times must be positive")
    return s[0] / math.fsum(s)
