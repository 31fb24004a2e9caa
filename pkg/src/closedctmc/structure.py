"""Recognize closed models made of decision hubs and sequential chains.

The derivable class is the one where every non-root state is entered by
exactly one transition.  Such a model is a spanning tree hanging off the
root plus any number of edges returning to the root.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .model import Model, Transition


class Pattern(str, Enum):
    Hub = "Hub"
    Cycle = "Cycle"
    Tree = "Tree"


class UnsupportedStructure(Exception):
    """Model lies outside the derivable class; only the numeric solver applies.

    ``states`` holds the indices of every non-root state whose in-degree is
    not exactly one, ``names`` their names.
    """

    def __init__(self, states: list[int], names: list[str], indegree: list[int]):
        self.states = states
        self.names = names
        self.indegree = indegree
        detail = ", ".join(f"{n} (in-degree {d})" for n, d in zip(names, indegree))
        super().__init__(f"not a decision/sequential model; offending states: {detail}")


@dataclass(frozen=True)
class Decomposition:
    root: int
    parent: dict[int, Transition]
    order: tuple[int, ...]
    pattern: Pattern


def classify(model: Model) -> Decomposition:
    indeg = [0] * model.n
    parent: dict[int, Transition] = {}
    for t in model.transitions:
        indeg[t.dst] += 1
        parent[t.dst] = t
    bad = [i for i in range(model.n) if i != model.root and indeg[i] != 1]
    if bad:
        raise UnsupportedStructure(bad, [model.states[i].name for i in bad],
                                   [indeg[i] for i in bad])
    parent.pop(model.root, None)

    # breadth-first over tree edges; strong connectivity guarantees coverage
    order = []
    todo = deque([model.root])
    while todo:
        u = todo.popleft()
        for t in model.outgoing(u):
            if t.dst != model.root:
                order.append(t.dst)
                todo.append(t.dst)
    assert len(order) == model.n - 1

    return Decomposition(model.root, parent, tuple(order), _pattern(model, parent))


def _pattern(model: Model, parent: dict[int, Transition]) -> Pattern:
    root = model.root
    single_out = all(len(model.outgoing(i)) == 1 for i in range(model.n))
    if single_out:
        return Pattern.Cycle
    hub = all(parent[k].src == root
              and len(model.outgoing(k)) == 1
              and model.outgoing(k)[0].dst == root
              for k in parent)
    return Pattern.Hub if hub else Pattern.Tree
