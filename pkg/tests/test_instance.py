import pytest
from hypothesis import given, settings, strategies as st

from hypersteiner.ratio import Rat
from hypersteiner.instance import (SteinerInstance, SteinerTree, parse_stp,
                                   render_stp, generate_random, STPParseError,
                                   edge_key)


def test_edge_key_orders():
    assert edge_key(5, 2) == (2, 5)
    assert edge_key(2, 5) == (2, 5)


def test_parse_basic():
    text = """33D32945 STP File, STP Format Version 1.0
SECTION Graph
Nodes 3
Edges 2
E 1 2 4
E 2 3 1/2
END
SECTION Terminals
Terminals 2
T 1
T 3
END
EOF
"""
    inst = parse_stp(text)
    assert inst.terminals == frozenset([1, 3])
    assert inst.costs[(1, 2)] == 4
    assert inst.costs[(2, 3)] == Rat(1, 2)


def test_parse_keeps_cheaper_parallel_edge():
    text = """SECTION Graph
Nodes 2
Edges 2
E 1 2 7
E 1 2 3
END
SECTION Terminals
Terminals 2
T 1
T 2
END
EOF
"""
    inst = parse_stp(text)
    assert inst.costs[(1, 2)] == 3


def test_parse_error_carries_line():
    with pytest.raises(STPParseError):
        parse_stp("SECTION Graph\nE 1 2\nEND\n")


def test_disconnected_rejected():
    with pytest.raises(ValueError):
        SteinerInstance([1, 2, 3], {(1, 2): Rat(1)}, [1, 3])


def test_tree_validation():
    inst = SteinerInstance([1, 2, 3], {(1, 2): Rat(1), (2, 3): Rat(1),
                                       (1, 3): Rat(5)}, [1, 3])
    t = SteinerTree(inst, [(1, 2), (2, 3)])
    assert t.cost == 2
    with pytest.raises(ValueError):
        SteinerTree(inst, [(1, 2)])  # does not span the terminals
    with pytest.raises(ValueError):
        SteinerTree(inst, [(1, 2), (2, 3), (1, 3)])  # cycle


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_render_parse_roundtrip(seed):
    inst = generate_random(4, 3, 0.5, seed=seed)
    back = parse_stp(render_stp(inst))
    # identical up to the canonical relabeling 1..n
    relabel = dict(zip(sorted(inst.vertices), range(1, len(inst.vertices) + 1)))
    assert back.terminals == frozenset(relabel[t] for t in inst.terminals)
    want = {edge_key(relabel[u], relabel[v]): c for (u, v), c in inst.costs.items()}
    assert back.costs == want


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_generate_random_shape(seed, quasi):
    inst = generate_random(5, 4, 0.4, seed=seed, quasi_bipartite=quasi)
    assert len(inst.terminals) == 5
    assert len(inst.vertices) == 9
    if quasi:
        assert inst.is_quasi_bipartite()


def test_generate_random_deterministic():
    a = generate_random(5, 3, 0.5, seed=99)
    b = generate_random(5, 3, 0.5, seed=99)
    assert a.costs == b.costs and a.terminals == b.terminals
