import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from crossing_forge.graph import (
    Edge, MultiGraph, PathDecomposition, TreeDecomposition, VertexId, decomposition_from_order,
    exact_pathwidth, expand_weights, free, lift_path_decomposition, lift_tree_decomposition,
    parse_label, read_decomposition, read_graph, subdivide_parallel, validate_decomposition,
    vertex_separation_order, write_decomposition, write_graph,
)
from crossing_forge.reduction import reduce
from crossing_forge.cnf import CnfInstance
from crossing_forge.weights import Color, w


def path_graph(t):
    return MultiGraph.from_pairs([(k, k + 1) for k in range(t - 1)], vertices=range(t))


def cycle_graph(t):
    return MultiGraph.from_pairs([(k, (k + 1) % t) for k in range(t)])


def clique(t):
    return MultiGraph.from_pairs(itertools.combinations(range(t), 2))


def random_graph(rng, nv, p):
    pairs = [(a, b) for a, b in itertools.combinations(range(nv), 2) if rng.random() < p]
    return MultiGraph.from_pairs(pairs, vertices=range(nv))


def vs_by_permutation(g):
    """Independent oracle: minimum over all orders of the max live boundary."""
    best = None
    for order in itertools.permutations(g.vertices):
        pos = {v: k for k, v in enumerate(order)}
        worst = 0
        for k in range(len(order)):
            live = {v for v in order[:k + 1] if any(pos[u] > k for u in g.neighbors(v))}
            worst = max(worst, len(live))
        best = worst if best is None else min(best, worst)
    return best or 0


@pytest.mark.parametrize("t", range(2, 9))
def test_exact_pathwidth_families(t):
    assert exact_pathwidth(path_graph(t)) == 1
    if t >= 3:
        assert exact_pathwidth(cycle_graph(t)) == 2
    assert exact_pathwidth(clique(t)) == t - 1


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.floats(0.1, 0.9), st.integers(0, 10**6))
def test_vertex_separation_matches_permutation_oracle(nv, p, seed):
    g = random_graph(random.Random(seed), nv, p)
    pw, order = vertex_separation_order(g)
    assert pw == vs_by_permutation(g)
    d = decomposition_from_order(g, order)
    chk = validate_decomposition(g, d)
    assert chk.valid and chk.width == pw


def test_pathwidth_guard():
    with pytest.raises(ValueError):
        exact_pathwidth(path_graph(21))


def test_validator_rejects_broken_decompositions():
    g = path_graph(4)
    ok = PathDecomposition((frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3})))
    assert validate_decomposition(g, ok).valid
    uncovered = PathDecomposition((frozenset({0, 1}), frozenset({2, 3})))
    assert "uncovered" in validate_decomposition(g, uncovered).violation
    split = PathDecomposition((frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3}), frozenset({1})))
    assert "not connected" in validate_decomposition(g, split).violation
    missing = PathDecomposition((frozenset({0, 1}),))
    assert not validate_decomposition(g, missing).valid
    cyc = TreeDecomposition(ok.bags, ((0, 1), (1, 2), (2, 0)))
    assert "not a tree" in validate_decomposition(g, cyc).violation


def test_subdivide_parallel_and_lift():
    g = MultiGraph.from_pairs([("a", "b"), ("a", "b"), ("a", "b"), ("b", "c")])
    sub = subdivide_parallel(g)
    assert len(sub.subdivided) == 2
    assert len(sub.graph.edges) == len(sub.graph.edge_pairs())
    pd = PathDecomposition((frozenset({"a", "b"}), frozenset({"b", "c"})))
    lifted = lift_path_decomposition(pd, sub, g)
    chk = validate_decomposition(sub.graph, lifted)
    assert chk.valid and chk.width == pd.width + 1
    td = lift_tree_decomposition(TreeDecomposition.from_path(pd), sub, g)
    assert validate_decomposition(sub.graph, td).valid


def test_expand_weights():
    g = MultiGraph(["a", "b"], [Edge(0, "a", "b", Color.C, w(2)), Edge(1, "a", "b")])
    assert len(expand_weights(g, 3).edges) == 10
    with pytest.raises(ValueError):
        expand_weights(g, 10**4)


@pytest.mark.parametrize("v", [
    VertexId("r", 1, 2, "L"), VertexId("b", 3, 4, "P"), VertexId("frame", 0, 0, "BL"),
    VertexId("corner", 2, 0, "u0"), VertexId("c", 0, 3, "R"), VertexId("sub", 17, 1), free("q7"),
])
def test_label_roundtrip(v):
    assert parse_label(str(v)) == v


def test_graph_and_decomposition_files_roundtrip():
    g, _ = reduce(CnfInstance.from_lists(2, [[1, -2], [2]]))
    text = write_graph(g)
    again = read_graph(text)
    assert write_graph(again) == text
    assert again.k_value == g.k_value and set(again.vertices) == set(g.vertices)
    d = TreeDecomposition.from_path(decomposition_from_order(g, list(g.vertices)))
    dt = write_decomposition(d)
    assert write_decomposition(read_decomposition(dt)) == dt


def test_read_graph_rejects_garbage():
    with pytest.raises(ValueError):
        read_graph("hello\n")
