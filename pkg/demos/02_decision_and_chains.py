# A decision state feeding two sequential chains.
#
# S0 -> S1, then S1 branches: S1 -> S2 -> S3 -> S4 -> S5 -> S0 at rate l1,
# or S1 -> S6 -> S7 -> S8 -> S9 -> S0 at rate l6.  Every state except S0
# has exactly one way in, so each probability is a multiple of pi_S0.

from pathlib import Path

import numpy as np

import closedctmc
from closedctmc import (Sym, classify, derive_tree, equivalent, evaluate, express_state,
                        parse_model, render, solve)
from closedctmc.expr import add, div, mul, Recip

fixtures = Path(closedctmc.__file__).parent / "fixtures"
model = parse_model((fixtures / "fig3.ctmc").read_text())

d = classify(model)
print("pattern:", d.pattern.value, " visit order:", [model.names[k] for k in d.order])

deriv = derive_tree(model, d)
for k in (1, 2, 6):
    print(f"c_{model.names[k]} =", render(deriv.coeffs[k]))

# %% the same root probability, written with the decision factored out
lam = [Sym(f"l{k}") for k in range(11)]


def factored(branch_rate):
    chains = add(1, *(div(lam[1], lam[k]) for k in (2, 3, 4, 5)),
                 *(div(lam[6], lam[k]) for k in (7, 8, 9, 10)))
    return Recip(add(1, mul(div(lam[0], add(lam[1], branch_rate)), chains)))


print("factored with l1 + l6 matches:", equivalent(deriv.pi0, factored(lam[6])))
# S1 leaves at l1 + l6; using l1 + l2 as the decision denominator is wrong
print("factored with l1 + l2 matches:", equivalent(deriv.pi0, factored(lam[2])))

# %% all rates equal to one gives pi_S0 = 2/11
ones = dict.fromkeys(model.rates(), 1.0)
print("pi_S0 at unit rates:", evaluate(deriv.pi0, ones), "vs", 2 / 11)

# %% closed form against the dense solve at the file's rates
closed = np.array([evaluate(express_state(deriv, k), model.rates()) for k in range(model.n)])
exact = solve(model).pi
print("max relative gap:", np.max(np.abs(closed - exact) / exact))
print("availability (S0, S1 up):", evaluate(deriv.availability_expr, model.rates()))
