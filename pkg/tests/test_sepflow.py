import itertools

from hypothesis import given, settings, strategies as st

from hypersteiner import sepflow, hyperlp
from hypersteiner.instance import generate_random
from hypersteiner.components import enumerate_components

from conftest import small_blowup, fractional_solution_n2


def _table_min(X, Q, F=frozenset()):
    table = X.slack_table(F)
    qmask = X.term_mask(Q)
    best = None
    for m in range(1, 1 << len(X.terminal_order)):
        if m & qmask == qmask:
            v = int(table[m])
            if best is None or v < best:
                best = v
    return best


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_flow_equals_table_minimum(seed):
    inst, X = small_blowup(seed % 1000)
    order = X.terminal_order
    for r in range(1, len(order) + 1):
        for Q in itertools.combinations(order, r):
            val, S = sepflow.min_slack_over_supersets(X, Q)
            want = _table_min(X, Q)
            assert val == want
            assert frozenset(Q) <= S
            assert int(X.slack_table()[X.term_mask(S)]) == want


def test_flow_with_removals():
    inst, sol = fractional_solution_n2()
    X = hyperlp.blowup_from_solution(inst, sol)
    eids = sorted(X.edges)
    for F in itertools.combinations(eids, 2):
        F = frozenset(F)
        for q in sorted(X.R):
            try:
                val, _ = sepflow.min_slack_over_supersets(X, {q}, F)
            except sepflow.NegativeTerminalLoad:
                continue
            assert val == _table_min(X, {q}, F)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_no_violation_at_optimum(seed):
    inst, X = small_blowup(seed % 1000)
    assert sepflow.most_violated_mask(X) is None


def test_violation_found_when_component_overweight():
    # doubling the star breaks the pair subset constraints
    inst, sol = fractional_solution_n2()
    vals = {c: v for c, v in sol.values.items()}
    comp = max(vals, key=lambda c: len(c.terminals))
    vals[comp] = vals[comp] * 2
    bad = hyperlp.FractionalSolution(sol.terminals, vals)
    assert not bad.check_feasible()
    X = hyperlp.blowup_from_solution(inst, bad)
    mask = sepflow.most_violated_mask(X)
    assert mask is not None
    table = X.slack_table()
    assert int(table[mask]) < 0
    # and it is a most negative subset
    assert int(table[mask]) == min(int(table[m]) for m in range(1, len(table)))


def test_gammoid_rank_bounds():
    inst, sol = fractional_solution_n2()
    X = hyperlp.blowup_from_solution(inst, sol)
    for copy in X.copies:
        Q = X.copy_terminals(copy)
        if len(Q) < 2:
            continue
        g = sepflow.GammoidOracle(X, Q)
        eids = sorted(X.edges)
        full = g.rank(eids)
        assert full == X.N * (len(Q) - 1)
        # monotone and subcardinal on a chain
        prev = 0
        for i in range(1, len(eids) + 1):
            r = g.rank(eids[:i])
            assert prev <= r <= i
            prev = r
