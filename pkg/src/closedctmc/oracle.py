"""Ground-truth steady state: dense balance-equation solve and trajectory simulation."""

from __future__ import annotations

import math
import warnings
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate

import numpy as np
import scipy.linalg

from .model import GeneratorMatrix, Model, SteadyState, build_generator, exit_rate


class SingularSystem(ArithmeticError):
    pass


def residual(q: GeneratorMatrix | np.ndarray, pi) -> float:
    """Max-norm of ``pi @ Q``."""
    qm = q.q if isinstance(q, GeneratorMatrix) else np.asarray(q)
    return float(np.max(np.abs(np.asarray(pi, dtype=float) @ qm)))


def solve_steady_state(q: GeneratorMatrix | np.ndarray, refine: int = 2) -> SteadyState:
    """Solve ``pi Q = 0, sum(pi) = 1``.

    The balance equation of the root state is swapped for the normalization
    row and the square system is solved by LU with partial pivoting.  The
    LU answer alone loses relative accuracy on small components, so it is
    polished by ``refine`` rounds of iterative refinement with residuals
    accumulated in extended precision.
    """
    gen = q if isinstance(q, GeneratorMatrix) else GeneratorMatrix(np.asarray(q, dtype=float))
    n = gen.n
    a = np.array(gen.q, dtype=float).T
    a[gen.root, :] = 1.0
    b = np.zeros(n)
    b[gen.root] = 1.0
    try:
        with np.errstate(over="raise", invalid="raise", divide="raise"), \
                warnings.catch_warnings():
            warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
            lu = scipy.linalg.lu_factor(a, check_finite=True)
            pi = scipy.linalg.lu_solve(lu, b)
            wide = a.astype(np.longdouble)
            for _ in range(refine):
                r = (b - wide @ pi.astype(np.longdouble)).astype(float)
                pi = pi + scipy.linalg.lu_solve(lu, r)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning, ValueError,
            FloatingPointError) as exc:
        raise SingularSystem(str(exc)) from None
    if not np.all(np.isfinite(pi)):
        raise SingularSystem("solution is not finite")
    pi.setflags(write=False)
    up = gen.up if gen.up is not None else np.ones(n, dtype=bool)
    avail = min(1.0, max(0.0, math.fsum(pi[up])))
    return SteadyState(pi, residual(gen, pi), avail)


def solve(model: Model) -> SteadyState:
    return solve_steady_state(build_generator(model))


@dataclass(frozen=True, eq=False)
class SimEstimate:
    occupancy: np.ndarray
    events: int
    horizon: float
    seed: int


_BLOCK = 1 << 16


def simulate(model: Model, horizon: float, seed: int = 0) -> SimEstimate:
    """Simulate one trajectory from the root up to time ``horizon``.

    Two PCG64 streams are spawned from ``SeedSequence(seed)``: the first
    feeds the exponential holding times (inverse CDF), the second the
    choice of successor.  Uniforms are drawn in fixed-size blocks so a given
    seed yields the same trajectory on every platform.
    """
    if not horizon > 0 or not math.isfinite(horizon):
        raise ValueError("horizon must be positive and finite")
    hold_ss, jump_ss = np.random.SeedSequence(seed).spawn(2)
    hold_rng = np.random.Generator(np.random.PCG64(hold_ss))
    jump_rng = np.random.Generator(np.random.PCG64(jump_ss))

    rates = [exit_rate(model, i) for i in range(model.n)]
    succ = []
    cum = []
    for i in range(model.n):
        out = model.outgoing(i)
        succ.append([t.dst for t in out])
        c = list(accumulate(t.value / rates[i] for t in out))
        c[-1] = 1.0
        cum.append(c[:-1])

    occ = [0.0] * model.n
    hold = hold_rng.random(_BLOCK).tolist()
    jump = jump_rng.random(_BLOCK).tolist()
    hi = ji = 0
    t = 0.0
    s = model.root
    events = 0
    log1p = math.log1p
    while True:
        if hi == _BLOCK:
            hold = hold_rng.random(_BLOCK).tolist()
            hi = 0
        dt = -log1p(-hold[hi]) / rates[s]
        hi += 1
        if t + dt >= horizon:
            occ[s] += horizon - t
            break
        occ[s] += dt
        t += dt
        events += 1
        if ji == _BLOCK:
            jump = jump_rng.random(_BLOCK).tolist()
            ji = 0
        s = succ[s][bisect_right(cum[s], jump[ji])]
        ji += 1

    occupancy = np.array(occ)
    occupancy /= occupancy.sum()
    occupancy.setflags(write=False)
    return SimEstimate(occupancy, events, float(horizon), seed)
