# Closed forms versus the dense solve on random decision/sequential models,
# and a model outside the class that only the dense solve handles.

import numpy as np

from closedctmc import Model, UnsupportedStructure, classify, derive_tree, solve
from closedctmc.expr import sample_rates

rng = np.random.default_rng(0)


def random_tree(n):
    parent = [None] + [int(rng.integers(0, i)) for i in range(1, n)]
    leaves = set(range(1, n)) - set(parent)
    edges = [(f"S{parent[i]}", f"S{i}") for i in range(1, n)] + [(f"S{i}", "S0") for i in leaves]
    return Model.build("tree", [(f"S{i}", i % 2 == 0) for i in range(n)],
                       [(a, b, f"k{j}", 1.0) for j, (a, b) in enumerate(edges)])


worst = 0.0
for _ in range(50):
    m = random_tree(int(rng.integers(2, 40)))
    deriv = derive_tree(m)
    b = sample_rates(m.rates(), rng)
    worst = max(worst, np.max(np.abs(deriv.evaluate(b) - solve(m.with_rates(b)).pi)
                              / solve(m.with_rates(b)).pi))
print("50 random trees, worst relative gap:", worst)

# %% two ways into C: no closed form from this method
mesh = Model.build("mesh", [("A", True), ("B", True), ("C", False)],
                   [("A", "B", "a", 1.0), ("B", "C", "b", 2.0), ("C", "A", "c", 3.0),
                    ("A", "C", "d", 0.5)])
try:
    classify(mesh)
except UnsupportedStructure as exc:
    print(exc)
    print("dense solve instead:", solve(mesh).pi)
