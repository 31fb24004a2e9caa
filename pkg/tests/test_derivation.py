import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from closedctmc import (Prod, Quot, Sum, Sym, derive_cycle_rates, derive_cycle_sojourn,
                        derive_hub, derive_tree, equivalent, evaluate, express_state, solve)
from closedctmc.expr import add, div, sample_rates
from modelgen import cycle_model, fig3_model, hub_model, random_tree_model


def test_hub_single():
    e = derive_hub(1, ["l0"], ["m0"])
    assert evaluate(e, {"l0": 2, "m0": 3}) == pytest.approx(0.6, rel=1e-15)
    d = derive_tree(hub_model([2.0], [3.0]))
    assert equivalent(d.pi0, e, tol=1e-12)


def test_hub_equal_rates():
    e = derive_hub(3, ["a", "b", "c"], ["a", "b", "c"])
    assert evaluate(e, {"a": 0.3, "b": 7.0, "c": 1e-2}) == pytest.approx(0.25, rel=1e-15)


def test_hub_against_oracle():
    rng = np.random.default_rng(3)
    vals = sample_rates([f"x{i}" for i in range(6)], rng)
    lams, mus = list(vals.values())[:3], list(vals.values())[3:]
    e = derive_hub(3, ["l0", "l1", "l2"], ["m0", "m1", "m2"])
    b = {**{f"l{i}": v for i, v in enumerate(lams)}, **{f"m{i}": v for i, v in enumerate(mus)}}
    assert evaluate(e, b) == pytest.approx(solve(hub_model(lams, mus)).pi[0], rel=1e-10)


@pytest.mark.parametrize("n", [1, 2, 4, 7])
def test_hub_matches_tree(n):
    d = derive_tree(hub_model([1.0] * n, [1.0] * n))
    assert equivalent(d.pi0, derive_hub(n, [f"l{i}" for i in range(n)],
                                         [f"m{i}" for i in range(n)]), tol=1e-12)


def test_cycle_rates_examples():
    assert evaluate(derive_cycle_rates(["a", "b"]), {"a": 2, "b": 3}) == pytest.approx(0.6)
    for m in (1, 3, 6):
        names = [f"l{i}" for i in range(m + 1)]
        assert evaluate(derive_cycle_rates(names), dict.fromkeys(names, 2.7)) == \
            pytest.approx(1 / (m + 1), rel=1e-15)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_cycle_matches_tree(n):
    d = derive_tree(cycle_model([1.0] * n))
    assert equivalent(d.pi0, derive_cycle_rates([f"l{i}" for i in range(n)]), tol=1e-12)


def test_cycle_sojourn_examples():
    assert derive_cycle_sojourn([3.0, 3.0, 3.0, 3.0]) == pytest.approx(0.25, rel=1e-15)
    assert derive_cycle_sojourn([2, 1, 1]) == 0.5
    with pytest.raises(ValueError):
        derive_cycle_sojourn([1.0, 0.0])


def test_cycle_sojourn_identity_random():
    rng = np.random.default_rng(11)
    names = [f"l{i}" for i in range(6)]
    e = derive_cycle_rates(names)
    for _ in range(50):
        tau = np.exp(rng.uniform(-5, 5, size=6))
        got = evaluate(e, {n: 1 / t for n, t in zip(names, tau)})
        assert math.isclose(derive_cycle_sojourn(tau), got, rel_tol=1e-12)


def test_two_state_cycle_tree():
    d = derive_tree(cycle_model([2.0, 3.0]))
    assert evaluate(d.pi0, {"l0": 2.0, "l1": 3.0}) == pytest.approx(0.6)
    assert equivalent(d.pi0, div(Sym("l1"), add(Sym("l0"), Sym("l1"))))


def test_fig3_state4_closed_form():
    d = derive_tree(fig3_model())
    lam = [Sym(f"l{k}") for k in range(11)]
    target = Quot(Prod((lam[1], lam[0], d.pi0)), Prod((lam[4], Sum((lam[1], lam[6])))))
    assert equivalent(express_state(d, "S4"), target)
    assert express_state(d, "S0") == d.pi0


def test_availability_expr_fig3():
    m = fig3_model([0.5 + k for k in range(11)])
    d = derive_tree(m)
    ss = solve(m)
    assert evaluate(d.availability_expr, m.rates()) == pytest.approx(ss.availability, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 30))
def test_forward_propagation_sound(seed, n):
    rng = np.random.default_rng(seed)
    m = random_tree_model(rng, n)
    d = derive_tree(m)
    b = m.rates()
    probs = np.array([evaluate(express_state(d, k), b) for k in range(m.n)])
    exact = solve(m).pi
    assert np.max(np.abs(probs - exact) / exact) <= 1e-9
    assert math.isclose(math.fsum(probs), 1.0, abs_tol=1e-12)
    assert math.isclose(evaluate(d.pi0, b) * math.fsum(evaluate(c, b) for c in d.coeffs.values()),
                        1.0, rel_tol=1e-12)
    assert all(evaluate(c, b) > 0 for c in d.coeffs.values())
