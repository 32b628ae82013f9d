import pytest
from hypothesis import given, settings, strategies as st

from hypersteiner.ratio import Rat
from hypersteiner.instance import SteinerInstance, generate_random
from hypersteiner import hyperlp, oracles

from conftest import fractional_solution_n2, small_blowup


def test_exact_two_terminals_is_shortest_path():
    costs = {(1, 3): Rat(2), (3, 2): Rat(2), (1, 2): Rat(5)}
    inst = SteinerInstance([1, 2, 3], costs, [1, 2])
    cost, tree = oracles.exact_steiner_tree(inst)
    assert cost == 4
    assert tree.edges == frozenset([(1, 3), (2, 3)])


def test_exact_guard():
    inst = generate_random(5, 2, 0.5, seed=1)
    with pytest.raises(ValueError):
        oracles.exact_steiner_tree(inst, max_terminals=4)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_exact_matches_exhaustive(seed):
    inst = generate_random(3, 2, 0.4, seed=seed)
    if len(inst.costs) > 18:
        return
    cost, _ = oracles.exact_steiner_tree(inst)
    assert cost == oracles.exhaustive_steiner_cost(inst)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_mst_two_approx_bound(seed):
    inst = generate_random(5, 3, 0.5, seed=seed)
    mst = oracles.mst_two_approx(inst)
    exact, _ = oracles.exact_steiner_tree(inst)
    assert exact <= mst.cost <= 2 * exact


def test_spanning_tree_count_k4():
    verts = [1, 2, 3, 4]
    edges = [(a, b) for i, a in enumerate(verts) for b in verts[i + 1:]]
    assert oracles.spanning_tree_count(verts, edges) == 16  # Cayley: 4^2


def test_splitting_set_count_matches_matrix_tree(frac_n2):
    inst, sol = frac_n2
    X = hyperlp.blowup_from_solution(inst, sol)
    Ks = list(oracles.enumerate_splitting_sets(X))
    # contracted multigraph: every terminal becomes one node
    node = {}
    for copy in X.copies:
        for v in copy.vertices:
            node[v] = -1 if v in X.R else v  # single contracted terminal node
    edges = [(node[e.u], node[e.v]) for e in X.edges.values()]
    verts = sorted(set(node.values()))
    assert len(Ks) == oracles.spanning_tree_count(verts, edges)


def test_minimal_removal_sizes(frac_n2):
    inst, sol = frac_n2
    X = hyperlp.blowup_from_solution(inst, sol)
    for copy in X.copies:
        Q = X.copy_terminals(copy)
        if len(Q) < 2:
            continue
        for B in oracles.enumerate_minimal_removals(X, Q):
            assert len(B) == X.N * (len(Q) - 1)
