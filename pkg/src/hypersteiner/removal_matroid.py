"""The matroid of removable edge sets of a blowup graph.

For a terminal set Q of a feasible blowup graph X, the edge sets B that
are inclusion-minimal with "X with N fresh copies of Q added, minus B,
stays feasible" form the bases of a matroid on E(X) with rank function

    r_Q(F) = min over S >= Q of h_{X-F}(S),

of total rank N(|Q|-1).  Three interchangeable oracles are provided:

  * "gammoid":     two max-flow evaluations per rank query (edge-split
                   network, paths from removed edges into Q or the sink);
  * "submodular":  one separation-network max flow on X - F;
  * "scan":        dense slack table of X - F, minimum over supersets of
                   Q's bitmask (fastest at small |R|, used by the
                   contraction pipeline).

All three are exact and are cross-checked against each other in tests.
"""

import random as _random

from .ratio import R0
from . import sepflow


class RemovalMatroid:
    def __init__(self, X, Q, groundset=None, mode="gammoid"):
        self.X = X
        self.Q = frozenset(Q)
        if not (self.Q and self.Q <= X.R):
            raise ValueError("Q must be a nonempty terminal subset")
        if mode not in ("gammoid", "submodular", "scan"):
            raise ValueError("unknown oracle mode %r" % mode)
        self.mode = mode
        self.groundset = tuple(sorted(X.edges if groundset is None else groundset))
        self.full_rank = X.N * (len(self.Q) - 1)
        self._gammoid = None
        if mode == "gammoid":
            self._gammoid = sepflow.GammoidOracle(X, self.Q)
        self._qmask = X.term_mask(self.Q)

    def rank(self, F):
        F = frozenset(F)
        if not F <= set(self.groundset):
            raise ValueError("F outside the ground set")
        if self.mode == "gammoid":
            return self._gammoid.rank(F)
        if self.mode == "submodular":
            val, _ = sepflow.min_slack_over_supersets(self.X, self.Q, F)
            return val
        h = self.X.slack_table(F)
        q = self._qmask
        best = None
        for m in range(1, len(h)):
            if m & q == q:
                v = int(h[m])
                if best is None or v < best:
                    best = v
        return best

    def is_independent(self, F):
        F = frozenset(F)
        if len(F) > self.full_rank:
            return False
        return self.rank(F) == len(F)

    def bases(self):
        """All bases, by brute force over the ground set (test scale)."""
        import itertools
        k = self.full_rank
        out = []
        for B in itertools.combinations(self.groundset, k):
            if self.rank(frozenset(B)) == k:
                out.append(frozenset(B))
        return out


def greedy_max_weight_basis(M, w):
    """Greedy basis of M maximizing total weight: weights descending,
    ties by edge id; each edge kept when independence is preserved.
    Raises if the ground set does not contain a basis."""
    order = sorted(M.groundset, key=lambda e: (-w.get(e, R0), e))
    B = set()
    for e in order:
        if len(B) == M.full_rank:
            break
        if M.rank(B | {e}) == len(B) + 1:
            B.add(e)
    if len(B) != M.full_rank:
        raise ValueError("ground set is rank deficient: %d < %d"
                         % (len(B), M.full_rank))
    return frozenset(B)


def verify_uniform_point(X, K, mode="exhaustive", samples=200, seed=0,
                         oracle="scan"):
    """Membership of the uniform vector (N/|pieces| on every edge of K) in
    the removable-set polytope, checked through its rank characterization:
    sum over pieces Q of r_Q(F) >= |F| * N for every F (exhaustive over all
    F subset of K, or a random sample).

    Returns (ok, details) where details carries the worst margin seen.
    Also checks h_{X-F}(R) == |F| for every tested F (K splitting).
    """
    from .splitting import compute_witnesses_and_weights
    compute_witnesses_and_weights(X, K)  # raises if K is not a splitting set
    K = sorted(K)
    pieces_terms = []
    for copy in X.copies:
        T = X.copy_terminals(copy)
        if len(T) >= 2:
            pieces_terms.append(T)
    npieces = len(X.copies)
    matroids = [RemovalMatroid(X, T, mode=oracle) for T in pieces_terms]

    def check(F):
        F = frozenset(F)
        total = sum(m.rank(F) for m in matroids)
        hR = int(X.slack_table(F)[-1])
        return total - len(F) * X.N, hR == len(F)

    worst = None
    ok = True
    if mode == "exhaustive":
        if len(K) > 16:
            raise ValueError("|K| too large for exhaustive mode")
        import itertools
        subsets = itertools.chain.from_iterable(
            itertools.combinations(K, r) for r in range(len(K) + 1))
    elif mode == "sampled":
        rng = _random.Random(seed)
        subsets = ([K[i] for i in range(len(K)) if rng.random() < 0.5]
                   for _ in range(samples))
    else:
        raise ValueError("unknown mode %r" % mode)
    for F in subsets:
        margin, h_ok = check(F)
        if worst is None or margin < worst:
            worst = margin
        if margin < 0 or not h_ok:
            ok = False
            break
    return ok, {"worst_margin": worst, "pieces": npieces, "mode": mode}
