import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from closedctmc import Model, Pattern, UnsupportedStructure, classify
from modelgen import FIG3_EDGES, cycle_model, fig3_model, hub_model, random_model, random_tree_model


def test_hub():
    d = classify(hub_model([1, 2, 3], [4, 5, 6]))
    assert d.pattern is Pattern.Hub
    assert all(d.parent[k].src == 0 for k in (1, 2, 3))


def test_cycle():
    assert classify(cycle_model([1, 2, 3, 4])).pattern is Pattern.Cycle


def test_two_state_reports_cycle():
    assert classify(cycle_model([2, 3])).pattern is Pattern.Cycle


def test_fig3_tree():
    d = classify(fig3_model())
    assert d.pattern is Pattern.Tree
    e = d.parent[4]
    assert (e.src, e.dst) == (3, 4)
    assert set(d.parent) == set(range(1, 10))
    assert d.order[0] == 1


def test_extra_edge_unsupported():
    m = fig3_model()
    edges = [(f"S{a}", f"S{b}", f"l{k}", 1.0) for k, (a, b) in enumerate(FIG3_EDGES)]
    edges.append(("S5", "S3", "x", 1.0))
    m = Model.build("bad", [(s.name, s.up) for s in m.states], edges)
    with pytest.raises(UnsupportedStructure) as info:
        classify(m)
    assert info.value.states == [3]
    assert info.value.names == ["S3"]
    assert "S3" in str(info.value)


def test_non_root_root_choice():
    # the same cycle rooted elsewhere still classifies
    m = Model.build("c", [("A", True), ("B", True), ("C", True)],
                    [("A", "B", "a", 1), ("B", "C", "b", 1), ("C", "A", "c", 1)], root="B")
    d = classify(m)
    assert d.root == 1 and d.pattern is Pattern.Cycle
    assert d.order == (2, 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 40))
def test_classify_iff_indegree_count(seed, n):
    rng = np.random.default_rng(seed)
    m = random_tree_model(rng, n) if seed % 2 else random_model(rng, n)
    into_root = sum(1 for t in m.transitions if t.dst == m.root)
    expect_ok = len(m.transitions) == (m.n - 1) + into_root and all(
        len(m.incoming(i)) == 1 for i in range(m.n) if i != m.root)
    try:
        d = classify(m)
    except UnsupportedStructure:
        assert not expect_ok
        return
    assert expect_ok
    assert len(m.transitions) == (m.n - 1) + into_root
    seen = {d.root}
    for k in d.order:
        assert d.parent[k].src in seen
        assert d.parent[k].dst == k
        seen.add(k)
    for k in d.parent:
        steps, cur = 0, k
        while cur != d.root:
            cur = d.parent[cur].src
            steps += 1
            assert steps <= m.n
    if d.pattern is Pattern.Hub:
        assert m.n > 2
