import pytest

from hypersteiner.ratio import Rat
from hypersteiner.instance import SteinerInstance, generate_random
from hypersteiner.components import enumerate_components
from hypersteiner import hyperlp


def triangle_star_instance():
    """Terminals 1,2,3 pairwise cost 5, Steiner hub 4 at cost 2 each: the
    3-terminal star is the strict optimum component."""
    costs = {(1, 2): Rat(5), (2, 3): Rat(5), (1, 3): Rat(5),
             (1, 4): Rat(2), (2, 4): Rat(2), (3, 4): Rat(2)}
    return SteinerInstance([1, 2, 3, 4], costs, [1, 2, 3])


def fractional_solution_n2():
    """Hand-built feasible point with denominator 2: half a 3-star plus
    two half pair components.  The cost layout makes every referenced
    component strictly optimal for its terminal set (no DP ties)."""
    inst = triangle_star_instance()
    comps = enumerate_components(inst)
    by_terms = {c.terminals: c for c in comps}
    sol = hyperlp.FractionalSolution(
        [1, 2, 3],
        {by_terms[frozenset([1, 2, 3])]: Rat(1, 2),
         by_terms[frozenset([1, 2])]: Rat(1, 2),
         by_terms[frozenset([2, 3])]: Rat(1, 2)})
    assert sol.check_feasible()
    return inst, sol


def small_blowup(seed, terminals=None, steiner=None):
    T = terminals if terminals is not None else 3 + seed % 2
    S = steiner if steiner is not None else 1 + seed % 2
    inst = generate_random(T, S, 0.4, seed=seed)
    sol = hyperlp.solve_lp_exact(inst, enumerate_components(inst))
    return inst, hyperlp.blowup_from_solution(inst, sol)


@pytest.fixture
def frac_n2():
    return fractional_solution_n2()
