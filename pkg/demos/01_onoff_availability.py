# Availability of a two-state repairable unit.
#
# A unit fails at rate l and is repaired at rate m.  The steady-state
# availability is m / (l + m); here it comes out of three routes that
# should all agree: the closed form, the dense solve, and a simulation.

from closedctmc import (Model, derive_tree, evaluate, express_state, render, simulate,
                        solve, sojourn_time)

unit = Model.build(
    "unit",
    states=[("ON", True), ("OFF", False)],
    edges=[("ON", "OFF", "l", 2.0), ("OFF", "ON", "m", 3.0)],
)

# %% closed form
d = derive_tree(unit)
print("pi_ON  =", render(d.pi0))
print("pi_OFF =", render(express_state(d, "OFF")))
print("A      =", render(d.availability_expr), "=", evaluate(d.availability_expr, unit.rates()))

# %% dense solve of pi Q = 0
ss = solve(unit)
print("dense solve pi =", ss.pi, "availability =", ss.availability)

# %% the ON fraction is the ratio of mean holding times
t_on, t_off = sojourn_time(unit, "ON"), sojourn_time(unit, "OFF")
print("E[T_on] / (E[T_on] + E[T_off]) =", t_on / (t_on + t_off))

# %% Monte Carlo, about 2.4 million transitions
est = simulate(unit, horizon=1e6, seed=7)
print("simulated occupancy =", est.occupancy, "after", est.events, "transitions")
