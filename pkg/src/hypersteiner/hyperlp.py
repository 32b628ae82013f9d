"""Component-based LP relaxation and blowup graphs.

The LP over candidate full components C (variables x_C >= 0):

    min  sum x_C cost(C)
    s.t. sum x_C (|S cap C| - 1)+  <=  |S| - 1   for all nonempty S subset R
         sum x_C (|C| - 1)          =  |R| - 1

A rational solution x is materialized as a *blowup graph*: N = lcm of the
denominators, and each component C appears as N*x_C vertex-disjoint tree
copies whose terminals are shared (identified) across copies.  The slack
of a terminal set S in a blowup graph X with edge set F removed is the
integer

    h(S) = N(|S| - 1) - sum over pieces P of X - F of (|S cap P| - 1)+

X - F is split per copy; pieces never merge through shared terminals.
x is LP-feasible iff h >= 0 on all nonempty S and h(R) = 0.

Slack values for *all* subsets at once are produced as numpy int64
tables indexed by terminal bitmask; per-copy piece contributions are
memoized, which is what makes matroid rank scans affordable.
"""

import itertools

import numpy as np

from .ratio import Rat, R0, lcm_denominators
from .components import Component

TABLE_TERMINAL_CAP = 16


class BlowupEdge:
    __slots__ = ("id", "u", "v", "cost", "copy_id", "orig", "aux")

    def __init__(self, eid, u, v, cost, copy_id, orig=None, aux=False):
        self.id = eid
        self.u = u
        self.v = v
        self.cost = cost
        self.copy_id = copy_id
        self.orig = orig      # edge key of the source instance, if any
        self.aux = aux        # zero-cost helper edge added by binarization

    def other(self, v):
        return self.u if v == self.v else self.v

    def __repr__(self):
        return "E%d(%d-%d, c=%s)" % (self.id, self.u, self.v, self.cost)


class BlowupCopy:
    __slots__ = ("id", "edge_ids", "vertices", "shape")

    def __init__(self, cid, edge_ids, vertices, shape):
        self.id = cid
        self.edge_ids = tuple(edge_ids)
        self.vertices = tuple(sorted(vertices))
        self.shape = shape  # memoization key shared by structurally equal copies

    def __repr__(self):
        return "Copy%d(V=%s)" % (self.id, list(self.vertices))


class BlowupGraph:
    """Immutable-by-convention: mutating operations return new graphs.

    Edge ids are stable across remove/contract operations so external
    bookkeeping (splitting sets, witness sets) survives them.
    """

    def __init__(self, N, terminals, copies, edges, next_vid, next_eid, next_cid,
                 shared_memo=None):
        self.N = N
        self.R = frozenset(terminals)
        self.copies = list(copies)
        self.edges = dict(edges)          # id -> BlowupEdge
        self._next_vid = next_vid
        self._next_eid = next_eid
        self._next_cid = next_cid
        self.terminal_order = tuple(sorted(self.R))
        self._tidx = {t: i for i, t in enumerate(self.terminal_order)}
        self._memo = {} if shared_memo is None else shared_memo
        self._tables = None

    # ---- basic accessors -------------------------------------------------

    def term_mask(self, vs):
        m = 0
        for v in vs:
            i = self._tidx.get(v)
            if i is not None:
                m |= 1 << i
        return m

    def mask_terms(self, mask):
        return frozenset(t for i, t in enumerate(self.terminal_order) if mask >> i & 1)

    def copy_terminals(self, copy):
        return frozenset(v for v in copy.vertices if v in self.R)

    def copy_cost(self, copy):
        return sum((self.edges[e].cost for e in copy.edge_ids), R0)

    def total_cost(self):
        return sum((e.cost for e in self.edges.values()), R0)

    def lp_value(self):
        return self.total_cost() / self.N

    # ---- pieces and slack ------------------------------------------------

    def copy_pieces(self, copy, removed):
        """Split one copy by removing `removed` (edge ids); returns a list of
        (vertex tuple, edge id tuple) pieces, single vertices included."""
        parent = {v: v for v in copy.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        kept = [e for e in copy.edge_ids if e not in removed]
        for eid in kept:
            e = self.edges[eid]
            ru, rv = find(e.u), find(e.v)
            if ru != rv:
                parent[ru] = rv
        verts = {}
        for v in copy.vertices:
            verts.setdefault(find(v), []).append(v)
        eids = {r: [] for r in verts}
        for eid in kept:
            eids[find(self.edges[eid].u)].append(eid)
        return [(tuple(verts[r]), tuple(eids[r])) for r in sorted(verts)]

    def _copy_contrib(self, copy, removed_local):
        """Summed contribution vector of one copy's pieces over every terminal
        mask: vec[S] = sum over pieces P of (|S cap P| - 1)+."""
        key = (copy.shape, removed_local)
        vec = self._memo.get(key)
        if vec is not None:
            return vec
        removed = {copy.edge_ids[i] for i in removed_local}
        r = len(self.terminal_order)
        pcm1 = self._pcm1()
        idx = np.arange(1 << r, dtype=np.int64)
        vec = np.zeros(1 << r, dtype=np.int64)
        for vs, _ in self.copy_pieces(copy, removed):
            m = self.term_mask(vs)
            if m:
                vec += pcm1[idx & m]
        self._memo[key] = vec
        return vec

    def _pcm1(self):
        # (popcount - 1)+ lookup over all terminal masks
        key = ("pcm1", len(self.terminal_order))
        v = self._memo.get(key)
        if v is None:
            r = len(self.terminal_order)
            pc = np.zeros(1 << r, dtype=np.int64)
            for i in range(r):
                pc[1 << i:1 << (i + 1)] = pc[:1 << i] + 1
            v = np.maximum(pc - 1, 0)
            self._memo[key] = v
        return v

    def slack_table(self, F=frozenset()):
        """numpy int64 vector of h(S) over all 2^|R| terminal masks (entry 0
        is set to 0 by convention)."""
        r = len(self.terminal_order)
        if r > TABLE_TERMINAL_CAP:
            raise ValueError("terminal set too large for slack tables")
        pcm1 = self._pcm1()
        pc = pcm1 + np.minimum(np.arange(1 << r, dtype=np.int64), 1)  # popcount via (x-1)+ + [x>0]
        h = self.N * (pc - 1)
        F = set(F)
        for copy in self.copies:
            loc = frozenset(i for i, eid in enumerate(copy.edge_ids) if eid in F)
            h -= self._copy_contrib(copy, loc)
        h[0] = 0
        return h

    def slack(self, S, F=frozenset()):
        """h(S) for one terminal subset, exact integer, no table."""
        S = frozenset(S)
        total = self.N * (len(S) - 1)
        for copy in self.copies:
            for vs, _ in self.copy_pieces(copy, set(F) & set(copy.edge_ids)):
                c = sum(1 for v in vs if v in S)
                if c > 1:
                    total -= c - 1
        return total

    def is_feasible(self, F=frozenset()):
        """LP feasibility of the blowup minus F: h >= 0 everywhere and
        h(R) = 0."""
        h = self.slack_table(F)
        return bool(h.min() >= 0 and h[-1] == 0)

    # ---- mutating operations (return new graphs) -------------------------

    def remove_edges(self, F):
        """X - F: drop the edges, split copies into their pieces (pieces with
        no edges vanish)."""
        F = set(F)
        copies = []
        cid = self._next_cid
        new_edges = {}
        for copy in self.copies:
            pieces = self.copy_pieces(copy, F)
            if len(pieces) == 1 and not (F & set(copy.edge_ids)):
                copies.append(copy)
                for eid in copy.edge_ids:
                    new_edges[eid] = self.edges[eid]
                continue
            for vs, eids in pieces:
                if not eids:
                    continue
                for eid in eids:
                    old = self.edges[eid]
                    new_edges[eid] = BlowupEdge(eid, old.u, old.v, old.cost, cid,
                                                old.orig, old.aux)
                copies.append(BlowupCopy(cid, eids, vs, ("p", cid)))
                cid += 1
        return BlowupGraph(self.N, self.R, copies, new_edges,
                           self._next_vid, self._next_eid, cid)

    def contract_terminals(self, TQ):
        """(X)/Q: identify the terminal class TQ to one fresh terminal z in
        every copy.  Requires that no copy holds two or more terminals of
        TQ (true after a basis removal).  Returns (new graph, z)."""
        TQ = frozenset(TQ)
        if len(TQ) < 2 or not TQ <= self.R:
            raise ValueError("need >= 2 existing terminals to contract")
        z = self._next_vid
        sub = {t: z for t in TQ}
        copies = []
        new_edges = {}
        for copy in self.copies:
            hits = sum(1 for v in copy.vertices if v in TQ)
            if hits > 1:
                raise ValueError("copy %d spans several terminals of the "
                                 "contracted component" % copy.id)
            if hits == 0:
                copies.append(copy)
                for eid in copy.edge_ids:
                    new_edges[eid] = self.edges[eid]
                continue
            vs = tuple(sub.get(v, v) for v in copy.vertices)
            for eid in copy.edge_ids:
                old = self.edges[eid]
                new_edges[eid] = BlowupEdge(eid, sub.get(old.u, old.u),
                                            sub.get(old.v, old.v),
                                            old.cost, copy.id, old.orig, old.aux)
            copies.append(BlowupCopy(copy.id, copy.edge_ids, vs, ("z", copy.shape, z)))
        R = (self.R - TQ) | {z}
        return BlowupGraph(self.N, R, copies, new_edges,
                           self._next_vid + 1, self._next_eid, self._next_cid), z

    def with_copies(self, copies, edges):
        return BlowupGraph(self.N, self.R, copies, edges,
                           self._next_vid, self._next_eid, self._next_cid)


def build_blowup(instance, solution):
    """Materialize a FractionalSolution as a BlowupGraph: N = lcm of the
    value denominators, N*x_C copies per component."""
    return blowup_from_solution(instance, solution)


def add_component(X, terminals):
    """Slack view of X * Q without materializing the N fresh Q-copies:
    returns a function S-mask -> h table of the extended graph."""
    q = X.term_mask(terminals)
    base = X.slack_table()
    pcm1 = X._pcm1()
    idx = np.arange(len(base), dtype=np.int64)
    return base - X.N * pcm1[idx & q]


def add_component_slack_ok(X, terminals, B):
    """Is (X * Q) - B feasible?  B is removed from X's edges only; the fresh
    Q-copies stay whole."""
    q = X.term_mask(terminals)
    h = X.slack_table(B)
    pcm1 = X._pcm1()
    idx = np.arange(len(h), dtype=np.int64)
    ext = h - X.N * pcm1[idx & q]
    return bool(ext.min() >= 0 and ext[-1] == 0)


class FractionalSolution:
    """Sparse LP point: exact rational value per component (zeros omitted)."""

    __slots__ = ("terminals", "values", "objective")

    def __init__(self, terminals, values):
        self.terminals = frozenset(terminals)
        self.values = {c: Rat(v) for c, v in values.items() if v != 0}
        for c, v in self.values.items():
            if v < 0:
                raise ValueError("negative component value")
        self.objective = sum((c.cost * v for c, v in self.values.items()), R0)

    def check_feasible(self):
        """Brute-force feasibility over all terminal subsets."""
        R = sorted(self.terminals)
        for size in range(2, len(R) + 1):
            for S in itertools.combinations(R, size):
                Sf = frozenset(S)
                load = sum((v * max(len(c.terminals & Sf) - 1, 0)
                            for c, v in self.values.items()), R0)
                if load > len(S) - 1:
                    return False
        total = sum((v * (len(c.terminals) - 1) for c, v in self.values.items()), R0)
        return total == len(R) - 1

    def to_blowup(self, instance):
        return blowup_from_solution(instance, self)


def blowup_from_solution(instance, solution):
    """BlowupGraph of a fractional solution, edge costs taken from the
    instance the components were enumerated on."""
    N = lcm_denominators(list(solution.values.values()) or [Rat(1)])
    R = frozenset(solution.terminals)
    used = set(R)
    for comp in solution.values:
        for (u, v) in comp.edges:
            used.update((u, v))
    vid = max(used) + 1 if used else 1
    eid = cid = 0
    copies = []
    edges = {}
    for comp in sorted(solution.values, key=lambda c: (sorted(c.terminals), c.edges)):
        mult = solution.values[comp] * N
        assert Rat(mult).denominator == 1, "lcm of denominators failed"
        for _ in range(int(mult)):
            vmap = {t: t for t in comp.terminals}
            vs = set(comp.terminals)
            e_ids = []
            for (u, v) in comp.edges:
                for w in (u, v):
                    if w not in vmap:
                        vmap[w] = vid
                        vs.add(vid)
                        vid += 1
                edges[eid] = BlowupEdge(eid, vmap[u], vmap[v],
                                        instance.costs[(u, v)], cid, orig=(u, v))
                e_ids.append(eid)
                eid += 1
            copies.append(BlowupCopy(cid, e_ids, vs, ("c", comp.edges)))
            cid += 1
    return BlowupGraph(N, R, copies, edges, vid, eid, cid)


# ---- LP solving ----------------------------------------------------------

FULL_ENUM_CAP = 12


def _lp_rows(components, terminal_order, masks):
    rows = []
    rhs = []
    order = {t: i for i, t in enumerate(terminal_order)}
    cmasks = [c.bitmask(terminal_order) for c in components]
    for m in masks:
        row = []
        for cm in cmasks:
            inter = bin(m & cm).count("1")
            row.append(Rat(max(inter - 1, 0)))
        rows.append(row)
        rhs.append(Rat(bin(m).count("1") - 1))
    return rows, rhs


def solve_lp_exact(instance, components, mode="auto", full_cap=FULL_ENUM_CAP):
    """Optimal exact solution of the component LP.

    mode "full" instantiates every subset row (2^|R| - 1 of them); mode
    "cuts" starts from singleton rows plus the full-set row and separates
    violated subsets with the combinatorial max-flow oracle.  "auto" picks
    "full" up to `full_cap` terminals and "cuts" beyond.
    """
    from .simplexq import solve_lp
    R = sorted(instance.terminals)
    r = len(R)
    if mode == "auto":
        mode = "full" if r <= full_cap else "cuts"
    if mode not in ("full", "cuts"):
        raise ValueError("unknown LP mode %r" % mode)
    if not components:
        raise ValueError("no components to optimize over")
    c = [comp.cost for comp in components]
    eq_row = [[Rat(len(comp.terminals) - 1) for comp in components]]
    eq_rhs = [Rat(r - 1)]

    if mode == "full":
        masks = list(range(1, 1 << r))
        rows, rhs = _lp_rows(components, R, masks)
        x, obj = solve_lp(c, rows, rhs, eq_row, eq_rhs)
        return _pack(instance, components, x)

    # cutting plane
    masks = [1 << i for i in range(r)] + [(1 << r) - 1]
    active = set(masks)
    while True:
        rows, rhs = _lp_rows(components, R, masks)
        x, obj = solve_lp(c, rows, rhs, eq_row, eq_rhs)
        sol = _pack(instance, components, x)
        viol = _most_violated(instance, sol)
        if viol is None:
            return sol
        if viol in active:
            raise AssertionError("separation returned an active row")
        active.add(viol)
        masks.append(viol)


def _pack(instance, components, x):
    vals = {comp: xi for comp, xi in zip(components, x) if xi != 0}
    return FractionalSolution(instance.terminals, vals)


def _most_violated(instance, sol):
    """Terminal mask of a most-violated subset constraint, or None if sol is
    feasible.  Ties: most negative slack, then smallest bitmask."""
    from . import sepflow
    X = blowup_from_solution(instance, sol)
    return sepflow.most_violated_mask(X)
