import random

import pytest
from hypothesis import given, settings, strategies as st

from crossing_forge.cnf import CnfInstance
from crossing_forge.graph import (
    MultiGraph, lift_path_decomposition, lift_tree_decomposition, subdivide_parallel,
    validate_decomposition,
)
from crossing_forge.reduction import reduce
from crossing_forge.widths import (
    LIFT, PLACE, CopStrategy, SearchState, StrategyError, certify_path, certify_tree,
    check_monotone, strategy_to_path_decomposition,
)

from conftest import random_cnf


def path_graph(t):
    return MultiGraph.from_pairs([(k, k + 1) for k in range(t - 1)])


def test_monotone_sweep_on_path():
    g = path_graph(5)
    moves = [(PLACE, 0)]
    for k in range(1, 5):
        moves += [(PLACE, k), (LIFT, k - 1)]
    moves.append((LIFT, 4))
    rep = check_monotone(g, CopStrategy(tuple(moves)))
    assert rep.ok and rep.max_cops == 2
    pd = strategy_to_path_decomposition(g, CopStrategy(tuple(moves)))
    assert validate_decomposition(g, pd).width == 1


def test_recontamination_detected():
    g = path_graph(3)
    s = CopStrategy(((PLACE, 0), (LIFT, 0), (PLACE, 1), (PLACE, 2), (LIFT, 1), (LIFT, 2)))
    rep = check_monotone(g, s)
    assert not rep.ok and "recontaminates" in rep.violation


def test_unfinished_strategy_detected():
    g = path_graph(3)
    rep = check_monotone(g, CopStrategy(((PLACE, 0), (PLACE, 1), (LIFT, 0))))
    assert not rep.ok


def test_search_state_refuses_unsafe_lift():
    st_ = SearchState(path_graph(3))
    st_.place(1)
    with pytest.raises(StrategyError):
        st_.lift(1)


@pytest.fixture(scope="module")
def example_graph():
    g, _ = reduce(CnfInstance.from_lists(5, [[1, -2, 4, -5], [-1, -3, 5], [2, 3, -4]]))
    return g


def test_example_path_decomposition(example_graph):
    cp = certify_path(example_graph)
    assert cp.monotone.ok and cp.monotone.max_cops <= 13
    chk = validate_decomposition(example_graph, cp.decomposition)
    assert chk.valid and chk.width <= 12


def test_example_tree_decomposition(example_graph):
    ct = certify_tree(example_graph)
    assert all(r.ok for r in ct.monotone.values())
    chk = validate_decomposition(example_graph, ct.decomposition)
    assert chk.valid and chk.width <= 9


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.integers(0, 10**6))
def test_width_bounds_random(n, ell, seed):
    g, _ = reduce(random_cnf(random.Random(seed), n, ell))
    cp = certify_path(g)
    assert validate_decomposition(g, cp.decomposition).width <= 12
    td = certify_tree(g).decomposition
    assert validate_decomposition(g, td).width <= 9
    sub = subdivide_parallel(g)
    lifted = lift_path_decomposition(cp.decomposition, sub, g)
    chk = validate_decomposition(sub.graph, lifted)
    assert chk.valid and chk.width <= 13
    assert validate_decomposition(sub.graph, lift_tree_decomposition(td, sub, g)).valid


def test_decomposition_is_deterministic(example_graph):
    assert certify_path(example_graph).decomposition == certify_path(example_graph).decomposition
    assert certify_tree(example_graph).decomposition == certify_tree(example_graph).decomposition
