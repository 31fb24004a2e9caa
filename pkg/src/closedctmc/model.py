"""CTMC model types, generator construction, sojourn times and availability."""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

import numpy as np

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ErrorKind(str, Enum):
    Syntax = "Syntax"
    DuplicateState = "DuplicateState"
    DuplicateTransition = "DuplicateTransition"
    DuplicateRate = "DuplicateRate"
    UnknownState = "UnknownState"
    UnknownRate = "UnknownRate"
    NonPositiveRate = "NonPositiveRate"
    SelfLoop = "SelfLoop"
    NoRoot = "NoRoot"
    NotStronglyConnected = "NotStronglyConnected"
    AbsorbingState = "AbsorbingState"


class ModelError(ValueError):
    """An invalid model.

    ``state`` / ``transition`` hold the index of the offending state or
    transition (in the order the caller supplied them) when one can be named.
    """

    def __init__(self, kind: ErrorKind, message: str, *,
                 state: Optional[int] = None, transition: Optional[int] = None):
        super().__init__(message)
        self.kind = ErrorKind(kind)
        self.message = message
        self.state = state
        self.transition = transition


@dataclass(frozen=True)
class State:
    index: int
    name: str
    up: bool


@dataclass(frozen=True)
class Transition:
    src: int
    dst: int
    rate: str  # symbol name
    value: float


StateRef = Union[int, str]


@dataclass(frozen=True)
class Model:
    """A closed, strongly connected CTMC.

    Transitions are stored sorted by ``(src, dst)`` so that two models built
    from the same edges in a different order compare equal.
    """

    name: str
    states: tuple[State, ...]
    transitions: tuple[Transition, ...]
    root: int = 0
    _out: tuple[tuple[Transition, ...], ...] = field(
        init=False, repr=False, compare=False)

    def __post_init__(self):
        states = tuple(self.states)
        transitions = tuple(self.transitions)
        _validate(states, transitions, self.root)
        object.__setattr__(self, "states", states)
        object.__setattr__(
            self, "transitions",
            tuple(sorted(transitions, key=lambda t: (t.src, t.dst))))
        out: list[list[Transition]] = [[] for _ in states]
        for t in self.transitions:
            out[t.src].append(t)
        object.__setattr__(self, "_out", tuple(tuple(o) for o in out))
        _check_closed(states, self._out, self.root)

    @classmethod
    def build(cls, name: str, states: Sequence[tuple[str, bool]],
              edges: Iterable[tuple[str, str, str, float]],
              root: Optional[str] = None) -> "Model":
        """Build a model from ``(name, up)`` pairs and ``(src, dst, symbol, value)`` edges."""
        st = tuple(State(i, n, bool(up)) for i, (n, up) in enumerate(states))
        index = {s.name: s.index for s in st}
        trans = []
        for k, (a, b, sym, val) in enumerate(edges):
            for endpoint in (a, b):
                if endpoint not in index:
                    raise ModelError(ErrorKind.UnknownState,
                                     f"unknown state '{endpoint}'", transition=k)
            trans.append(Transition(index[a], index[b], sym, float(val)))
        if root is not None and root not in index:
            raise ModelError(ErrorKind.NoRoot, f"unknown root state '{root}'")
        return cls(name, st, tuple(trans), index[root] if root is not None else 0)

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.states)

    @property
    def up_mask(self) -> np.ndarray:
        return np.array([s.up for s in self.states], dtype=bool)

    def index_of(self, s: StateRef) -> int:
        if isinstance(s, str):
            for st in self.states:
                if st.name == s:
                    return st.index
            raise KeyError(f"unknown state '{s}'")
        if not 0 <= s < self.n:
            raise KeyError(f"state index {s} out of range")
        return int(s)

    def outgoing(self, s: StateRef) -> tuple[Transition, ...]:
        return self._out[self.index_of(s)]

    def incoming(self, s: StateRef) -> tuple[Transition, ...]:
        i = self.index_of(s)
        return tuple(t for t in self.transitions if t.dst == i)

    def rates(self) -> dict[str, float]:
        """Rate symbol -> bound value, sorted by symbol."""
        return {t.rate: t.value for t in sorted(self.transitions, key=lambda t: t.rate)}

    def with_rates(self, bindings: dict[str, float]) -> "Model":
        """Same structure with rate values replaced from ``bindings``."""
        trans = tuple(Transition(t.src, t.dst, t.rate, float(bindings[t.rate]))
                      for t in self.transitions)
        return Model(self.name, self.states, trans, self.root)

    def with_up(self, up: Sequence[bool]) -> "Model":
        states = tuple(State(s.index, s.name, bool(u)) for s, u in zip(self.states, up))
        return Model(self.name, states, self.transitions, self.root)


def _validate(states, transitions, root):
    if not states:
        raise ModelError(ErrorKind.NoRoot, "model declares no states")
    seen = {}
    for i, s in enumerate(states):
        if s.index != i:
            raise ModelError(ErrorKind.Syntax,
                             f"state '{s.name}' has index {s.index}, expected {i}", state=i)
        if not IDENT_RE.match(s.name):
            raise ModelError(ErrorKind.Syntax, f"invalid state name {s.name!r}", state=i)
        if s.name in seen:
            raise ModelError(ErrorKind.DuplicateState,
                             f"duplicate state '{s.name}'", state=i)
        seen[s.name] = i
    if not (isinstance(root, (int, np.integer)) and 0 <= root < len(states)):
        raise ModelError(ErrorKind.NoRoot, f"root {root!r} is not a state")

    pairs = set()
    symbols: dict[str, float] = {}
    for k, t in enumerate(transitions):
        if not (0 <= t.src < len(states) and 0 <= t.dst < len(states)):
            raise ModelError(ErrorKind.UnknownState,
                             f"transition {t.src}->{t.dst} names an unknown state",
                             transition=k)
        if t.src == t.dst:
            raise ModelError(ErrorKind.SelfLoop,
                             f"self-loop on state '{states[t.src].name}'", transition=k)
        if not IDENT_RE.match(t.rate):
            raise ModelError(ErrorKind.Syntax, f"invalid rate name {t.rate!r}",
                             transition=k)
        if not (math.isfinite(t.value) and t.value > 0):
            raise ModelError(ErrorKind.NonPositiveRate,
                             f"rate {t.rate} must be positive and finite, got {t.value!r}",
                             transition=k)
        if (t.src, t.dst) in pairs:
            raise ModelError(
                ErrorKind.DuplicateTransition,
                f"duplicate transition '{states[t.src].name}' -> '{states[t.dst].name}'",
                transition=k)
        pairs.add((t.src, t.dst))
        if symbols.setdefault(t.rate, t.value) != t.value:
            raise ModelError(ErrorKind.DuplicateRate,
                             f"rate '{t.rate}' bound to two different values",
                             transition=k)


def _reach(n, adj, start):
    seen = [False] * n
    seen[start] = True
    todo = deque([start])
    while todo:
        u = todo.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                todo.append(v)
    return seen


def _check_closed(states, out, root):
    n = len(states)
    for i in range(n):
        if not out[i]:
            raise ModelError(ErrorKind.AbsorbingState,
                             f"state '{states[i].name}' has no outgoing transition",
                             state=i)
    fwd = [[t.dst for t in out[i]] for i in range(n)]
    rev: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in fwd[i]:
            rev[j].append(i)
    from_root = _reach(n, fwd, root)
    to_root = _reach(n, rev, root)
    for i in range(n):
        if not from_root[i]:
            raise ModelError(ErrorKind.NotStronglyConnected,
                             f"state '{states[i].name}' is not reachable from the root",
                             state=i)
        if not to_root[i]:
            raise ModelError(ErrorKind.NotStronglyConnected,
                             f"state '{states[i].name}' cannot return to the root",
                             state=i)


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """Dense infinitesimal generator with zero row sums.

    ``up`` and ``root`` ride along from the model so a solve can report
    availability and pick the normalization column.
    """

    q: np.ndarray
    up: Optional[np.ndarray] = None
    root: int = 0

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @property
    def max_rate(self) -> float:
        return float(np.max(-np.diag(self.q)))


@dataclass(frozen=True, eq=False)
class SteadyState:
    pi: np.ndarray
    residual: float
    availability: float


def build_generator(model: Model) -> GeneratorMatrix:
    q = np.zeros((model.n, model.n))
    for t in model.transitions:
        q[t.src, t.dst] = t.value
    np.fill_diagonal(q, -q.sum(axis=1))
    q.setflags(write=False)
    up = model.up_mask
    up.setflags(write=False)
    return GeneratorMatrix(q, up, model.root)


def exit_rate(model: Model, s: StateRef) -> float:
    return math.fsum(t.value for t in model.outgoing(s))


def sojourn_time(model: Model, s: StateRef) -> float:
    """Mean holding time in ``s``: the reciprocal of its total exit rate."""
    return 1.0 / exit_rate(model, s)


def availability(model: Model, ss: SteadyState) -> float:
    pi = np.asarray(ss.pi)
    a = math.fsum(pi[model.up_mask])
    return min(1.0, max(0.0, a))
